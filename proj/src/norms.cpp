#include "twistlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

void require_finite(const Group& g, const char* what) {
  if (!g.is_finite()) throw Error(ErrorCode::not_finite, std::string(what) + " needs a finite group");
}

// Compressed sparse rows; one matrix for A and one for A^H so both products
// are row-parallel and every output entry is summed in a fixed order.
struct Csr {
  std::size_t rows = 0;
  std::vector<std::size_t> start;
  std::vector<std::uint32_t> col;
  std::vector<Complex> val;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  Complex val;
};

Csr to_csr(std::size_t rows, std::vector<Triplet>& t) {
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr m;
  m.rows = rows;
  m.start.assign(rows + 1, 0);
  for (const auto& e : t) ++m.start[e.row + 1];
  for (std::size_t i = 0; i < rows; ++i) m.start[i + 1] += m.start[i];
  m.col.reserve(t.size());
  m.val.reserve(t.size());
  for (const auto& e : t) {
    m.col.push_back(e.col);
    m.val.push_back(e.val);
  }
  return m;
}

void multiply_rows(const Csr& m, const std::vector<Complex>& x, std::vector<Complex>& y, std::size_t lo,
                   std::size_t hi) {
  for (std::size_t i = lo; i < hi; ++i) {
    Complex s = 0.0;
    for (std::size_t p = m.start[i]; p < m.start[i + 1]; ++p) s += m.val[p] * x[m.col[p]];
    y[i] = s;
  }
}

void multiply(const Csr& m, const std::vector<Complex>& x, std::vector<Complex>& y, unsigned threads) {
  y.assign(m.rows, Complex{});
  const std::size_t n = m.rows;
  if (threads <= 1 || n < 4096) {
    multiply_rows(m, x, y, 0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back([&, lo, hi] { multiply_rows(m, x, y, lo, hi); });
  }
}

double squared_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

}  // namespace

ComplexMatrix regular_rep(const Cocycle& sigma, const AlgebraElement& a) {
  const Group& g = a.group();
  require_finite(g, "regular_rep");
  if (!(g == sigma.group())) throw Error(ErrorCode::backend_mismatch, "cocycle and element over different groups");
  const std::size_t n = g.order();
  ComplexMatrix m(n, n);
  for (std::size_t h = 0; h < n; ++h) {
    const auto eh = g.element_at(h);
    for (const auto& [x, c] : a.terms()) {
      const auto xi = static_cast<std::uint32_t>(g.index_of(x));
      m(g.compose_index(xi, static_cast<std::uint32_t>(h)), h) += sigma(x, eh) * c;
    }
  }
  return m;
}

double exact_norm(const Cocycle& sigma, const AlgebraElement& a) {
  require_finite(a.group(), "exact_norm");
  if (a.empty()) return 0.0;
  return operator_norm(regular_rep(sigma, a));
}

TruncatedNorm truncated_norm_lower(const Cocycle& sigma, const AlgebraElement& a, int radius,
                                   const NormOptions& options) {
  const Group& g = a.group();
  if (!(g == sigma.group())) throw Error(ErrorCode::backend_mismatch, "cocycle and element over different groups");
  if (radius < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  TruncatedNorm out;
  out.radius = radius;
  if (a.empty()) {
    out.converged = true;
    return out;
  }
  const int reach = radius + static_cast<int>(a.max_word_length());
  const std::size_t codomain_size = g.ball_size(reach);
  if (codomain_size > options.mem_cap)
    throw Error(ErrorCode::memory_budget_exceeded, "ball of radius " + std::to_string(reach) + " has " +
                                                       std::to_string(codomain_size) + " elements, cap is " +
                                                       std::to_string(options.mem_cap));
  const auto domain = g.enumerate_ball(radius);
  const auto codomain = g.enumerate_ball(reach);
  std::unordered_map<GroupElement, std::uint32_t, GroupElementHash> where;
  where.reserve(codomain.size());
  for (std::size_t i = 0; i < codomain.size(); ++i) where.emplace(codomain[i], static_cast<std::uint32_t>(i));

  std::vector<Triplet> forward, backward;
  forward.reserve(domain.size() * a.support_size());
  backward.reserve(domain.size() * a.support_size());
  for (std::size_t h = 0; h < domain.size(); ++h) {
    for (const auto& [x, c] : a.terms()) {
      const auto it = where.find(g.compose(x, domain[h]));
      if (it == where.end()) throw Error(ErrorCode::unsupported, "codomain ball does not contain a product");
      const Complex v = sigma(x, domain[h]) * c;
      forward.push_back({it->second, static_cast<std::uint32_t>(h), v});
      backward.push_back({static_cast<std::uint32_t>(h), it->second, std::conj(v)});
    }
  }
  const Csr fwd = to_csr(codomain.size(), forward);
  const Csr bwd = to_csr(domain.size(), backward);
  forward.clear();
  backward.clear();
  out.domain_size = domain.size();
  out.codomain_size = codomain.size();

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> x(domain.size());
  for (auto& v : x) {
    const double re = normal(rng), im = normal(rng);
    v = Complex(re, im);
  }
  double nx = std::sqrt(squared_norm(x));
  for (auto& v : x) v /= nx;

  const unsigned threads = std::max(1u, options.threads);
  std::vector<Complex> w, y;
  double best = 0.0, previous = 0.0;
  int quiet = 0;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    multiply(fwd, x, w, threads);
    const double rq = squared_norm(w);  // Rayleigh quotient of A^H A at the unit vector x
    best = std::max(best, rq);
    out.iterations = it;
    if (it > 1 && std::abs(rq - previous) <= options.converged_threshold * rq) {
      if (++quiet >= 2) {
        out.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
    previous = rq;
    multiply(bwd, w, y, threads);
    const double ny = std::sqrt(squared_norm(y));
    if (ny == 0.0) {
      out.converged = true;
      break;
    }
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] / ny;
  }
  out.value = std::sqrt(best);
  return out;
}

double haagerup_upper(const AlgebraElement& a) {
  const Group& g = a.group();
  if (g.kind() != GroupKind::free) throw Error(ErrorCode::backend_mismatch, "haagerup_upper needs a free group");
  std::map<std::size_t, double> spheres;
  for (const auto& [x, c] : a.terms()) spheres[g.word_length(x)] += std::norm(c);
  double s = 0.0;
  for (const auto& [n, sq] : spheres) s += static_cast<double>(n + 1) * std::sqrt(sq);
  return s;
}

Json NormEstimate::to_json() const {
  Json j{{"lower", lower}, {"lower_method", lower_method}};
  j["upper"] = upper ? Json(*upper) : Json(nullptr);
  j["upper_method"] = upper_method.empty() ? Json(nullptr) : Json(upper_method);
  j["radius"] = radius ? Json(*radius) : Json(nullptr);
  j["iterations"] = iterations;
  return j;
}

Json TransferReport::to_json() const {
  Json per = Json::array();
  for (const auto& s : per_sigma) per.push_back(Json{{"max_ratio", s.max_ratio}, {"holds", s.holds}});
  return Json{{"constant", constant}, {"sample_size", sample_size}, {"tolerance", tolerance},
              {"holds", holds},       {"per_sigma", std::move(per)}};
}

TransferReport transfer_check(const Group& g, std::span<const GroupElement> support, std::span<const Cocycle> sigmas,
                              std::uint64_t seed, std::size_t random_samples) {
  require_finite(g, "transfer_check");
  if (support.empty()) throw Error(ErrorCode::invalid_argument, "empty support set");
  std::vector<GroupElement> s(support.begin(), support.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  std::vector<AlgebraElement> sample;
  AlgebraElement ones(g);
  for (const auto& x : s) ones.add(x, 1.0);
  sample.push_back(ones);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < random_samples; ++i) sample.push_back(random_on_support(g, s, rng));
  for (const auto& x : s) sample.push_back(AlgebraElement::delta(g, x));

  TransferReport report;
  report.sample_size = sample.size();
  const Cocycle trivial = Cocycle::trivial(g);
  for (const auto& a : sample) report.constant = std::max(report.constant, exact_norm(trivial, a) / l2_norm(a));
  report.holds = true;
  for (const auto& sigma : sigmas) {
    TransferSigmaResult r;
    for (const auto& a : sample) r.max_ratio = std::max(r.max_ratio, exact_norm(sigma, a) / l2_norm(a));
    r.holds = r.max_ratio <= report.constant + report.tolerance;
    report.holds = report.holds && r.holds;
    report.per_sigma.push_back(r);
  }
  return report;
}

SpectralReport l2_spectral_radius(const AlgebraElement& a, const Cocycle& sigma, int max_power,
                                  const NormOptions& options) {
  if (max_power < 1) throw Error(ErrorCode::invalid_argument, "max power must be at least 1");
  SpectralReport report;
  AlgebraElement p = a;
  for (int n = 1; n <= max_power; ++n) {
    if (n > 1) {
      if (p.support_size() > 4 * options.mem_cap / std::max<std::size_t>(1, a.support_size()))
        throw Error(ErrorCode::memory_budget_exceeded,
                    "power " + std::to_string(n) + " would exceed the support cap of " + std::to_string(options.mem_cap));
      p = convolve(p, a, sigma);
      if (p.support_size() > options.mem_cap)
        throw Error(ErrorCode::memory_budget_exceeded, "support of power " + std::to_string(n) + " exceeds cap");
    }
    report.r2_sequence.push_back(std::pow(l2_norm(p), 1.0 / n));
  }
  report.r2_estimate = report.r2_sequence.back();
  report.normal = is_normal(a, sigma);
  return report;
}

Json SpectralReport::to_json() const {
  Json j{{"r2_sequence", r2_sequence},
         {"r2_estimate", r2_estimate},
         {"estimate_at_n", r2_sequence.size()},
         {"normal", normal}};
  j["r_sigma"] = r_sigma ? Json(*r_sigma) : Json(nullptr);
  j["r_sigma_method"] = r_sigma_method.empty() ? Json(nullptr) : Json(r_sigma_method);
  return j;
}

SpectralReport spectral_report(const AlgebraElement& a, const Cocycle& sigma, int max_power, int radius,
                               const NormOptions& options) {
  SpectralReport report = l2_spectral_radius(a, sigma, max_power, options);
  if (a.group().is_finite()) {
    const auto spectrum = exact_spectrum(sigma, a);
    double r = 0.0;
    for (const auto& z : spectrum) r = std::max(r, std::abs(z));
    report.r_sigma = r;
    report.r_sigma_method = "exact_spectrum";
  } else if (report.normal) {
    report.r_sigma = truncated_norm_lower(sigma, a, radius, options).value;
    report.r_sigma_method = "truncated_norm_lower(normal, r=" + std::to_string(radius) + ")";
  }
  return report;
}

Json FreenessCertificate::to_json(const Group& g, const std::vector<GroupElement>& generators) const {
  Json gens = Json::array();
  for (const auto& x : generators) gens.push_back(g.element_to_json(x));
  Json j{{"certified", certified}, {"length", length}, {"products_checked", products_checked},
         {"generators", std::move(gens)}};
  if (collision) {
    j["counterexample"] = Json{{"first", first_sequence},
                               {"second", second_sequence},
                               {"element", g.element_to_json(*collision)}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

FreenessCertificate certify_free_subsemigroup(const Group& g, const GroupElement& t, std::span<const GroupElement> f,
                                              int max_length, std::size_t cap) {
  if (f.empty()) throw Error(ErrorCode::invalid_argument, "empty generator set");
  if (max_length < 1) throw Error(ErrorCode::invalid_argument, "length must be at least 1");
  std::vector<GroupElement> gens;
  for (const auto& x : f) gens.push_back(g.compose(t, x));

  // Sequences as a prefix tree: node = (parent, generator index).
  struct Node {
    std::size_t parent;
    std::size_t gen;
  };
  constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;
  std::vector<GroupElement> products;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> seen;
  auto sequence = [&](std::size_t id) {
    std::vector<std::size_t> seq;
    for (std::size_t i = id; i != kRoot; i = nodes[i].parent) seq.push_back(nodes[i].gen);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  FreenessCertificate cert;
  std::size_t level_begin = 0, level_end = 0;
  for (int len = 1; len <= max_length; ++len) {
    const std::size_t parents = len == 1 ? 1 : level_end - level_begin;
    if (nodes.size() + parents * gens.size() > cap)
      throw Error(ErrorCode::memory_budget_exceeded, "sequence count exceeds cap at length " + std::to_string(len));
    const std::size_t next_begin = nodes.size();
    for (std::size_t p = 0; p < parents; ++p) {
      const std::size_t parent = len == 1 ? kRoot : level_begin + p;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        GroupElement prod = parent == kRoot ? gens[i] : g.compose(products[parent], gens[i]);
        const std::size_t id = nodes.size();
        nodes.push_back({parent, i});
        products.push_back(prod);
        ++cert.products_checked;
        auto [it, inserted] = seen.emplace(prod, id);
        if (!inserted) {
          cert.certified = false;
          cert.length = len;
          cert.first_sequence = sequence(it->second);
          cert.second_sequence = sequence(id);
          cert.collision = prod;
          return cert;
        }
      }
    }
    level_begin = next_begin;
    level_end = nodes.size();
  }
  cert.certified = true;
  cert.length = max_length;
  return cert;
}

Json CriterionReport::to_json(const Group& g) const {
  Json items = Json::array();
  for (const auto& s : samples) {
    Json j{{"element", s.element.to_json()["terms"]},
           {"r2_sequence", s.r2_sequence},
           {"truncated_norm", s.truncated_norm},
           {"haagerup_upper", s.haagerup},
           {"gap", s.gap}};
    if (s.transported) {
      j["transported"] = Json{{"element", s.transported->to_json()["terms"]},
                              {"r2_sequence", s.transported_r2_sequence},
                              {"truncated_norm", *s.transported_truncated_norm},
                              {"deviation", *s.gauge_deviation}};
    }
    items.push_back(std::move(j));
  }
  return Json{{"certificate", certificate.to_json(g, generators)},
              {"samples", std::move(items)},
              {"gauge_transported", gauge_transported},
              {"max_gauge_deviation", max_gauge_deviation}};
}

CriterionReport criterion_report(const Cocycle& sigma, const GroupElement& t, std::span<const GroupElement> f,
                                 const CriterionConfig& config) {
  const Group& g = sigma.group();
  if (g.kind() != GroupKind::free) throw Error(ErrorCode::unsupported, "criterion_report needs a free group");
  CriterionReport report;
  for (const auto& x : f) report.generators.push_back(g.compose(t, x));
  report.certificate = certify_free_subsemigroup(g, t, f, config.certify_length, config.norm.mem_cap);

  std::vector<AlgebraElement> elements = config.elements;
  if (elements.empty()) {
    std::mt19937_64 rng(config.seed);
    for (std::size_t i = 0; i < config.samples; ++i) elements.push_back(random_on_support(g, report.generators, rng));
  }
  const auto beta = sigma.coboundary_phase();
  report.gauge_transported = beta.has_value();
  const Cocycle trivial = Cocycle::trivial(g);
  for (const auto& a : elements) {
    for (const auto& [x, c] : a.terms())
      if (std::find(report.generators.begin(), report.generators.end(), x) == report.generators.end())
        throw Error(ErrorCode::invalid_argument, "element is not supported on tF");
    CriterionSample s{a, {}, 0.0, 0.0, 0.0, std::nullopt, {}, std::nullopt, std::nullopt};
    s.r2_sequence = l2_spectral_radius(a, sigma, config.max_power, config.norm).r2_sequence;
    s.truncated_norm = truncated_norm_lower(sigma, a, config.radius, config.norm).value;
    s.haagerup = haagerup_upper(a);
    s.gap = s.truncated_norm - s.r2_sequence.back();
    if (beta) {
      // sigma = d beta, so T_beta maps the untwisted algebra onto this one.
      AlgebraElement u = gauge(a, beta->conjugate());
      s.transported_r2_sequence = l2_spectral_radius(u, trivial, config.max_power, config.norm).r2_sequence;
      s.transported_truncated_norm = truncated_norm_lower(trivial, u, config.radius, config.norm).value;
      double dev = std::abs(*s.transported_truncated_norm - s.truncated_norm);
      for (std::size_t n = 0; n < s.r2_sequence.size(); ++n)
        dev = std::max(dev, std::abs(s.r2_sequence[n] - s.transported_r2_sequence[n]));
      s.gauge_deviation = dev;
      s.transported = std::move(u);
      report.max_gauge_deviation = std::max(report.max_gauge_deviation, dev);
    }
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace twistlab
