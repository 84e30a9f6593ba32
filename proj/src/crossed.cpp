#include "twistlab/crossed.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <iterator>
#include <tuple>

#include "twistlab/error.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/norms.hpp"

namespace twistlab {

namespace {

using Vec = std::vector<Complex>;

double distance(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1.0;
  return v;
}

// Dense arithmetic in C[K, sigma_K] on coefficient vectors in index order.
struct KAlgebra {
  std::size_t n = 0;
  std::vector<std::uint32_t> product;  // product[i * n + j]
  std::vector<std::uint32_t> inverse;
  std::vector<Complex> sigma;          // sigma[i * n + j]

  explicit KAlgebra(const Cocycle& s) : n(s.group().order()), sigma(s.tabulate()) {
    const Group& g = s.group();
    product.resize(n * n);
    inverse.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      inverse[i] = g.invert_index(i);
      for (std::uint32_t j = 0; j < n; ++j) product[i * n + j] = g.compose_index(i, j);
    }
  }

  Vec mul(const Vec& x, const Vec& y) const {
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out[product[i * n + j]] += sigma[i * n + j] * x[i] * y[j];
    }
    return out;
  }

  Vec star(const Vec& x) const {
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[inverse[i]] = std::conj(sigma[i * n + inverse[i]]) * std::conj(x[i]);
    return out;
  }

  Vec one() const { return unit_vector(n, 0); }
};

Vec coefficients(const AlgebraElement& a) {
  const Group& g = a.group();
  Vec v(g.order());
  for (const auto& [x, c] : a.terms()) v[g.index_of(x)] = c;
  return v;
}

AlgebraElement element_of(const Group& g, const Vec& v) {
  AlgebraElement a(g);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != Complex{}) a.add(g.element_at(i), v[i]);
  return a;
}

Vec act(const ComplexMatrix& m, const Vec& v) { return m.apply(v); }

bool is_square(std::size_t r, int& root) {
  const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(r))));
  root = static_cast<int>(s);
  return s * s == r;
}

}  // namespace

std::string_view to_string(Convention c) { return c == Convention::as_printed ? "as-printed" : "conjugated"; }

Convention convention_from_string(std::string_view s) {
  if (s == "as-printed") return Convention::as_printed;
  if (s == "conjugated") return Convention::conjugated;
  throw Error(ErrorCode::invalid_argument, "unknown convention '" + std::string(s) + "'");
}

Json TwistedSystem::to_json() const {
  Json a = Json::array();
  for (const auto& m : alpha) a.push_back(matrix_to_json(m));
  Json r = Json::array();
  for (const auto& x : rho) r.push_back(x.to_json()["terms"]);
  return Json{{"k", k.to_json()},          {"lambda", lambda.to_json()}, {"sigma_k", sigma_k.to_json()},
              {"convention", to_string(convention)}, {"alpha", std::move(a)}, {"rho", std::move(r)}};
}

TwistedSystem induced_action_data(const Cocycle& sigma, Convention convention) {
  const Group& gamma = sigma.group();
  if (gamma.kind() != GroupKind::extension)
    throw Error(ErrorCode::backend_mismatch, "induced_action_data needs an extension group");
  const ExtensionData& ext = gamma.extension();
  const auto nk = static_cast<std::uint32_t>(ext.k.order());
  const auto nl = static_cast<std::uint32_t>(ext.lambda.order());

  std::vector<GroupElement> kernel;
  for (std::uint32_t i = 0; i < nk; ++i) kernel.push_back(ExtPair{i, 0});
  Cocycle sigma_k = restrict(sigma, kernel);
  TwistedSystem sys{sigma_k.group(), ext.lambda, sigma_k, {}, {}, convention};

  auto section = [](std::uint32_t h) { return GroupElement(ExtPair{0, h}); };
  auto kernel_index = [&](const GroupElement& x) {
    const auto p = *x.get_if<ExtPair>();
    if (p.h != 0) throw Error(ErrorCode::invalid_action, "conjugate of a kernel element left the kernel");
    return p.k;
  };

  for (std::uint32_t h = 0; h < nl; ++h) {
    const GroupElement s = section(h), s_inv = gamma.invert(s);
    ComplexMatrix m(nk, nk);
    for (std::uint32_t j = 0; j < nk; ++j) {
      const GroupElement kj = ExtPair{j, 0};
      const GroupElement c = gamma.compose(gamma.compose(s, kj), s_inv);
      const Complex second = sigma(c, s);
      const Complex coef = sigma(s, kj) * (convention == Convention::conjugated ? std::conj(second) : second);
      m(kernel_index(c), j) = coef;
    }
    sys.alpha.push_back(std::move(m));
  }
  for (std::uint32_t h1 = 0; h1 < nl; ++h1) {
    for (std::uint32_t h2 = 0; h2 < nl; ++h2) {
      const GroupElement s1 = section(h1), s2 = section(h2), s12 = section(ext.lambda.compose_index(h1, h2));
      const GroupElement kappa = gamma.compose(gamma.compose(s1, s2), gamma.invert(s12));
      const Complex coef = sigma(s1, s2) * std::conj(sigma(kappa, s12));
      sys.rho.push_back(AlgebraElement::delta(sys.k, sys.k.element_at(kernel_index(kappa)), coef));
    }
  }
  return sys;
}

double AxiomReport::max_residual() const {
  return std::max({automorphism, unitarity, normalization, composition, cocycle});
}

Json AxiomReport::to_json() const {
  Json f = Json::array();
  for (const auto& w : failures) {
    Json j{{"axiom", w.axiom}, {"lambda", w.lambda_indices}, {"residual", w.residual}};
    j["k"] = w.k_index ? Json(*w.k_index) : Json(nullptr);
    f.push_back(std::move(j));
  }
  return Json{{"pass", pass},
              {"tolerance", tolerance},
              {"residuals",
               {{"automorphism", automorphism},
                {"unitarity", unitarity},
                {"normalization", normalization},
                {"composition", composition},
                {"cocycle", cocycle}}},
              {"failures", std::move(f)}};
}

AxiomReport verify_twisted_action(const TwistedSystem& sys, double tolerance) {
  const KAlgebra kalg(sys.sigma_k);
  const std::size_t nk = kalg.n, nl = sys.lambda_order();
  const Group& lam = sys.lambda;
  AxiomReport report;
  report.tolerance = tolerance;

  std::vector<AxiomWitness> worst(5);
  const char* names[] = {"automorphism", "unitarity", "normalization", "composition", "cocycle"};
  double* slots[] = {&report.automorphism, &report.unitarity, &report.normalization, &report.composition,
                     &report.cocycle};
  auto note = [&](int axiom, double r, std::vector<std::size_t> hs, std::optional<std::size_t> k) {
    if (r > *slots[axiom]) {
      *slots[axiom] = r;
      worst[axiom] = AxiomWitness{names[axiom], std::move(hs), k, r};
    }
  };

  std::vector<Vec> rho(sys.rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = coefficients(sys.rho[i]);
  auto rho_at = [&](std::size_t h1, std::size_t h2) -> const Vec& { return rho[h1 * nl + h2]; };
  const Vec one = kalg.one();

  for (std::size_t h = 0; h < nl; ++h) {
    const ComplexMatrix& a = sys.alpha[h];
    note(0, distance(act(a, one), one), {h}, std::nullopt);
    for (std::size_t j1 = 0; j1 < nk; ++j1) {
      const Vec u1 = unit_vector(nk, j1);
      const Vec a1 = act(a, u1);
      note(0, distance(act(a, kalg.star(u1)), kalg.star(a1)), {h}, j1);
      for (std::size_t j2 = 0; j2 < nk; ++j2) {
        const Vec u2 = unit_vector(nk, j2);
        note(0, distance(act(a, kalg.mul(u1, u2)), kalg.mul(a1, act(a, u2))), {h}, j1);
      }
    }
  }
  for (std::size_t h1 = 0; h1 < nl; ++h1) {
    for (std::size_t h2 = 0; h2 < nl; ++h2) {
      const Vec& r = rho_at(h1, h2);
      const Vec rs = kalg.star(r);
      note(1, std::max(distance(kalg.mul(r, rs), one), distance(kalg.mul(rs, r), one)), {h1, h2}, std::nullopt);
    }
  }
  {
    const ComplexMatrix id = ComplexMatrix::identity(nk);
    note(2, (sys.alpha[0] - id).frobenius_norm(), {0}, std::nullopt);
    for (std::size_t h = 0; h < nl; ++h) {
      note(2, distance(rho_at(0, h), one), {0, h}, std::nullopt);
      note(2, distance(rho_at(h, 0), one), {h, 0}, std::nullopt);
    }
  }
  for (std::size_t h1 = 0; h1 < nl; ++h1) {
    for (std::size_t h2 = 0; h2 < nl; ++h2) {
      const std::size_t h12 = lam.compose_index(static_cast<std::uint32_t>(h1), static_cast<std::uint32_t>(h2));
      const Vec& r = rho_at(h1, h2);
      const Vec rs = kalg.star(r);
      for (std::size_t j = 0; j < nk; ++j) {
        const Vec u = unit_vector(nk, j);
        const Vec lhs = act(sys.alpha[h1], act(sys.alpha[h2], u));
        const Vec rhs = kalg.mul(kalg.mul(r, act(sys.alpha[h12], u)), rs);
        note(3, distance(lhs, rhs), {h1, h2}, j);
      }
      for (std::size_t h3 = 0; h3 < nl; ++h3) {
        const auto i = [&](std::size_t a, std::size_t b) {
          return lam.compose_index(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        };
        const Vec lhs = kalg.mul(act(sys.alpha[h1], rho_at(h2, h3)), rho_at(h1, i(h2, h3)));
        const Vec rhs = kalg.mul(r, rho_at(i(h1, h2), h3));
        note(4, distance(lhs, rhs), {h1, h2, h3}, std::nullopt);
      }
    }
  }
  report.pass = true;
  for (int a = 0; a < 5; ++a) {
    if (*slots[a] > tolerance) {
      report.pass = false;
      report.failures.push_back(worst[a]);
    }
  }
  return report;
}

double BlockResiduals::max() const { return std::max({idempotent, self_adjoint, orthogonal, completeness, central}); }

std::vector<int> BlockDecomposition::sorted_sizes() const {
  std::vector<int> s = block_sizes;
  std::sort(s.begin(), s.end());
  return s;
}

Json BlockDecomposition::to_json(bool with_projections) const {
  Json j{{"block_sizes", block_sizes},
         {"center_dimension", center_dimension},
         {"attempts", attempts},
         {"seed", seed},
         {"residuals",
          {{"idempotent", residuals.idempotent},
           {"self_adjoint", residuals.self_adjoint},
           {"orthogonal", residuals.orthogonal},
           {"completeness", residuals.completeness},
           {"central", residuals.central}}}};
  if (with_projections) {
    Json p = Json::array();
    for (const auto& x : projections) p.push_back(x.to_json()["terms"]);
    j["projections"] = std::move(p);
  }
  return j;
}

ComplexMatrix RegularAlgebra::left_of(std::span<const Complex> x) const {
  const std::size_t d = dim();
  ComplexMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == Complex{}) continue;
    ComplexMatrix t = left[j];
    t *= x[j];
    m += t;
  }
  return m;
}

std::vector<Complex> RegularAlgebra::multiply(std::span<const Complex> x, std::span<const Complex> y) const {
  const std::size_t d = dim();
  Vec out(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == Complex{}) continue;
    const Vec col = left[j].apply(y);
    for (std::size_t i = 0; i < d; ++i) out[i] += x[j] * col[i];
  }
  return out;
}

std::vector<Complex> RegularAlgebra::star(std::span<const Complex> x) const {
  // L(x*) = L(x)^H, so x* = L(x)^H 1 is the conjugated row `unit` of L(x).
  const std::size_t d = dim();
  Vec out(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == Complex{}) continue;
    for (std::size_t i = 0; i < d; ++i) out[i] += std::conj(x[j] * left[j](unit, i));
  }
  return out;
}

RegularAlgebra twisted_group_algebra(const Cocycle& sigma) {
  const Group& g = sigma.group();
  if (!g.is_finite()) throw Error(ErrorCode::not_finite, "block decomposition needs a finite group");
  RegularAlgebra alg{g, {}, g.index_of(g.identity())};
  for (std::size_t j = 0; j < g.order(); ++j) alg.left.push_back(regular_rep(sigma, AlgebraElement::delta(g, g.element_at(j))));
  return alg;
}

BlockDecomposition decompose_algebra(const RegularAlgebra& algebra, const DecomposeOptions& options) {
  const std::size_t d = algebra.dim();
  // z is central iff (R_j - L_j) z = 0 for every basis vector b_j, where R_j z = z b_j.
  std::vector<ComplexMatrix> commutators;
  ComplexMatrix stacked(d * d, d);
  for (std::size_t j = 0; j < d; ++j) {
    ComplexMatrix c(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t r = 0; r < d; ++r) c(r, i) = algebra.left[i](r, j) - algebra.left[j](r, i);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t i = 0; i < d; ++i) stacked(j * d + r, i) = c(r, i);
    commutators.push_back(std::move(c));
  }
  const ComplexMatrix center = null_space(stacked, 1e-9);
  const std::size_t cdim = center.cols();
  if (cdim == 0) throw Error(ErrorCode::degenerate_after_retries, "empty center");

  const Vec one = unit_vector(d, algebra.unit);
  for (std::size_t attempt = 0; attempt < options.retries; ++attempt) {
    std::mt19937_64 rng(options.seed + attempt);
    std::normal_distribution<double> normal;
    Vec z(d);
    for (std::size_t c = 0; c < cdim; ++c) {
      const double re = normal(rng), im = normal(rng);
      const Complex w(re, im);
      for (std::size_t i = 0; i < d; ++i) z[i] += w * center(i, c);
    }
    const ComplexMatrix lz = algebra.left_of(z);
    ComplexMatrix h = lz + lz.adjoint();
    h *= 0.5;
    const HermitianEigen eig = hermitian_eigen(h);
    double scale = 1.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));

    std::vector<std::pair<std::size_t, std::size_t>> clusters;
    for (std::size_t lo = 0; lo < d;) {
      std::size_t hi = lo + 1;
      while (hi < d && eig.values[hi] - eig.values[hi - 1] <= options.cluster_gap * scale) ++hi;
      clusters.emplace_back(lo, hi);
      lo = hi;
    }
    if (clusters.size() != cdim) continue;

    std::vector<Vec> projections;
    std::vector<int> sizes;
    std::size_t total = 0;
    bool ok = true;
    for (const auto& [lo, hi] : clusters) {
      // p = E 1 with E the spectral projection of the cluster.
      Vec p(d);
      for (std::size_t c = lo; c < hi; ++c) {
        Complex w = std::conj(eig.vectors(algebra.unit, c));
        for (std::size_t i = 0; i < d; ++i) p[i] += eig.vectors(i, c) * w;
      }
      int n = 0;
      const std::size_t r = rank_eps(algebra.left_of(p), options.rank_eps);
      if (!is_square(r, n) || n == 0) {
        ok = false;
        break;
      }
      total += r;
      projections.push_back(std::move(p));
      sizes.push_back(n);
    }
    if (!ok || total != d) continue;

    std::vector<std::size_t> order(projections.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](std::size_t i) {
      std::vector<std::pair<double, double>> k;
      for (const auto& c : projections[i]) k.emplace_back(std::round(c.real() * 1e9), std::round(c.imag() * 1e9));
      return std::make_pair(sizes[i], k);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    BlockDecomposition out;
    out.center_dimension = cdim;
    out.attempts = attempt + 1;
    out.seed = options.seed + attempt;
    Vec sum(d);
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const Vec& p = projections[order[idx]];
      out.block_sizes.push_back(sizes[order[idx]]);
      out.projections.push_back(element_of(algebra.carrier, p));
      auto& res = out.residuals;
      res.idempotent = std::max(res.idempotent, distance(algebra.multiply(p, p), p));
      res.self_adjoint = std::max(res.self_adjoint, distance(algebra.star(p), p));
      for (const auto& c : commutators) res.central = std::max(res.central, l2_norm(c.apply(p)));
      for (std::size_t other = 0; other < order.size(); ++other)
        if (other != idx)
          res.orthogonal = std::max(res.orthogonal, l2_norm(algebra.multiply(p, projections[order[other]])));
      for (std::size_t i = 0; i < d; ++i) sum[i] += p[i];
    }
    out.residuals.completeness = distance(sum, one);
    return out;
  }
  throw Error(ErrorCode::degenerate_after_retries,
              "no central element separated the blocks after " + std::to_string(options.retries) + " attempts");
}

BlockDecomposition decompose_blocks(const Cocycle& sigma, const DecomposeOptions& options) {
  return decompose_algebra(twisted_group_algebra(sigma), options);
}

Json Summand::to_json() const {
  return Json{{"blocks", blocks},
              {"base_block", base_block},
              {"stabilizer", stabilizer},
              {"index", index},
              {"block_size", block_size},
              {"dimension", dimension},
              {"green_dimension", green_dimension},
              {"assembled_blocks", assembled_blocks}};
}

Json OrbitDecomposition::to_json() const {
  Json s = Json::array();
  for (const auto& x : summands) s.push_back(x.to_json());
  return Json{{"permutation", permutation}, {"summands", std::move(s)}, {"max_residual", max_residual}};
}

OrbitDecomposition orbit_decomposition(const TwistedSystem& sys, const BlockDecomposition& blocks, double tol) {
  const std::size_t nl = sys.lambda_order(), nb = blocks.projections.size();
  std::vector<Vec> p;
  for (const auto& x : blocks.projections) p.push_back(coefficients(x));
  OrbitDecomposition out;
  out.permutation.assign(nl, std::vector<std::size_t>(nb));
  for (std::size_t h = 0; h < nl; ++h) {
    for (std::size_t i = 0; i < nb; ++i) {
      const Vec image = act(sys.alpha[h], p[i]);
      double best = INFINITY;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < nb; ++j) {
        const double dist = distance(image, p[j]);
        if (dist < best) {
          best = dist;
          arg = j;
        }
      }
      if (best > tol)
        throw Error(ErrorCode::not_permuting, "alpha_" + std::to_string(h) + " maps projection " + std::to_string(i) +
                                                  " to no projection (distance " + std::to_string(best) + ")");
      out.permutation[h][i] = arg;
      out.max_residual = std::max(out.max_residual, best);
    }
  }
  std::vector<bool> seen(nb, false);
  for (std::size_t i = 0; i < nb; ++i) {
    if (seen[i]) continue;
    Summand s;
    s.base_block = i;
    for (std::size_t h = 0; h < nl; ++h) {
      s.blocks.push_back(out.permutation[h][i]);
      if (out.permutation[h][i] == i) s.stabilizer.push_back(h);
    }
    std::sort(s.blocks.begin(), s.blocks.end());
    s.blocks.erase(std::unique(s.blocks.begin(), s.blocks.end()), s.blocks.end());
    for (auto b : s.blocks) {
      seen[b] = true;
      if (blocks.block_sizes[b] != blocks.block_sizes[i])
        throw Error(ErrorCode::not_permuting, "orbit mixes blocks of different sizes");
    }
    s.index = nl / s.stabilizer.size();
    s.block_size = blocks.block_sizes[i];
    const auto n2 = static_cast<std::size_t>(s.block_size) * static_cast<std::size_t>(s.block_size);
    s.dimension = s.blocks.size() * n2 * nl;
    s.green_dimension = s.stabilizer.size() * n2 * s.index * s.index;
    out.summands.push_back(std::move(s));
  }
  return out;
}

CrossedProduct assemble_crossed_product(const TwistedSystem& sys, const DecomposeOptions& options) {
  const KAlgebra kalg(sys.sigma_k);
  const std::size_t nk = kalg.n, nl = sys.lambda_order(), d = nk * nl;
  std::vector<std::vector<std::uint32_t>> action(nl, std::vector<std::uint32_t>(nk));
  for (auto& perm : action)
    for (std::uint32_t i = 0; i < nk; ++i) perm[i] = i;
  const Group carrier = build_extension(sys.k, sys.lambda, action, std::vector<std::uint32_t>(nl * nl, 0));

  std::vector<Vec> rho;
  for (const auto& r : sys.rho) rho.push_back(coefficients(r));
  RegularAlgebra alg{carrier, {}, 0};
  for (std::size_t b = 0; b < d; ++b) {
    const std::size_t k = b % nk, h = b / nk;
    const Vec uk = unit_vector(nk, k);
    ComplexMatrix m(d, d);
    for (std::size_t b2 = 0; b2 < d; ++b2) {
      const std::size_t k2 = b2 % nk, h2 = b2 / nk;
      const Vec x = kalg.mul(kalg.mul(uk, sys.alpha[h].column(k2)), rho[h * nl + h2]);
      const std::size_t hh = sys.lambda.compose_index(static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h2));
      for (std::size_t i = 0; i < nk; ++i) m(i + nk * hh, b2) = x[i];
    }
    alg.left.push_back(std::move(m));
  }
  CrossedProduct cp{std::move(alg), {}};
  cp.blocks = decompose_algebra(cp.algebra, options);
  return cp;
}

void match_summands(const TwistedSystem& sys, const BlockDecomposition& k_blocks, const CrossedProduct& crossed,
                    OrbitDecomposition& orbits, double tol) {
  const std::size_t nk = sys.k_order(), d = crossed.dimension();
  std::vector<ComplexMatrix> summand_left;
  for (auto& s : orbits.summands) {
    s.assembled_blocks.clear();
    Vec big(d);
    for (auto b : s.blocks) {
      const Vec p = coefficients(k_blocks.projections[b]);
      for (std::size_t i = 0; i < nk; ++i) big[i] += p[i];  // u_k v_e sits at index k
    }
    summand_left.push_back(crossed.algebra.left_of(big));
  }
  for (std::size_t q = 0; q < crossed.blocks.projections.size(); ++q) {
    const Vec v = coefficients(crossed.blocks.projections[q]);
    const double scale = std::max(1.0, l2_norm(v));
    std::optional<std::size_t> owner;
    for (std::size_t s = 0; s < summand_left.size(); ++s) {
      if (distance(summand_left[s].apply(v), v) <= tol * scale) {
        if (owner) throw Error(ErrorCode::not_permuting, "crossed-product block fits two summands");
        owner = s;
      }
    }
    if (!owner) throw Error(ErrorCode::not_permuting, "crossed-product block " + std::to_string(q) + " fits no summand");
    orbits.summands[*owner].assembled_blocks.push_back(crossed.blocks.block_sizes[q]);
  }
  for (auto& s : orbits.summands) std::sort(s.assembled_blocks.begin(), s.assembled_blocks.end());
}

Json BlockComparison::to_json() const {
  return Json{{"equal", equal}, {"only_first", only_first}, {"only_second", only_second}};
}

BlockComparison compare_block_structure(const std::vector<int>& first, const std::vector<int>& second) {
  std::vector<int> a = first, b = second;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  BlockComparison out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.only_first));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(out.only_second));
  out.equal = out.only_first.empty() && out.only_second.empty();
  return out;
}

BlockComparison compare_block_structure(const BlockDecomposition& first, const BlockDecomposition& second) {
  return compare_block_structure(first.block_sizes, second.block_sizes);
}

Json InvertibilityCheck::to_json() const {
  return Json{{"samples", samples},
              {"reached", reached},
              {"max_perturbation", max_perturbation},
              {"budget", budget},
              {"pass", pass()}};
}

InvertibilityCheck invertible_density(const RegularAlgebra& algebra, std::size_t samples, std::uint64_t seed,
                                      double budget) {
  const std::size_t d = algebra.dim();
  InvertibilityCheck out;
  out.samples = samples;
  out.budget = budget;
  std::vector<double> shifts{0.0};
  for (double t = 1e-8; t <= budget * (1 + 1e-12); t *= 10) shifts.push_back(t);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec x(d);
    for (auto& c : x) {
      const double re = normal(rng), im = normal(rng);
      c = Complex(re, im);
    }
    // Roughly half the samples are pushed onto a singular element to make the shift matter.
    if (s % 2 == 1) {
      const Vec p = coefficients(AlgebraElement::delta(algebra.carrier, algebra.carrier.element_at(algebra.unit)));
      const ComplexMatrix lx = algebra.left_of(x);
      const auto eig = general_eigenvalues(lx);
      for (std::size_t i = 0; i < d; ++i) x[i] -= eig.front() * p[i];
    }
    const ComplexMatrix lx = algebra.left_of(x);
    for (double t : shifts) {
      ComplexMatrix m = lx;
      for (std::size_t i = 0; i < d; ++i) m(i, i) += t;
      const auto sv = singular_values(m);
      if (sv.back() > 1e-12 * std::max(1.0, sv.front())) {
        ++out.reached;
        out.max_perturbation = std::max(out.max_perturbation, t);
        break;
      }
    }
  }
  return out;
}

}  // namespace twistlab
