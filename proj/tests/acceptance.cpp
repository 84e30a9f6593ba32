// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "cli_runner.hpp"
#include "twistlab/crossed.hpp"
#include "twistlab/fixtures.hpp"
#include "twistlab/norms.hpp"

using namespace twistlab;
namespace fx = twistlab::fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

unsigned worker_threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

// Left twisted convolution matrix built straight from the cocycle table and the
// group's index arithmetic: entry (xy, y) += sigma(x, y) a_x.
ComplexMatrix oracle_regular_matrix(const Cocycle& sigma, const AlgebraElement& a) {
  const Group& g = sigma.group();
  const auto n = static_cast<std::uint32_t>(g.order());
  const auto table = sigma.tabulate();
  ComplexMatrix m(n, n);
  for (const auto& [x, c] : a.terms()) {
    const auto xi = static_cast<std::uint32_t>(g.index_of(x));
    for (std::uint32_t y = 0; y < n; ++y) m(g.compose_index(xi, y), y) += table[xi * n + y] * c;
  }
  return m;
}

// 1. |(a *_sigma b)_g| <= (a+ * b+)_g pointwise.
void majorization(Outcome& out) {
  const Group z6 = fx::cyclic(6), s3 = fx::symmetric(3), d4 = fx::dihedral4(), q8 = fx::quaternion8(), f2 = Group::free(2);
  const Cocycle d4_class = fx::dihedral4_projective();
  std::mt19937_64 rng(20240601);
  double worst = -1;
  const int total = 1000;
  for (int t = 0; t < total; ++t) {
    const std::uint64_t seed = 1000 + t;
    Cocycle sigma = Cocycle::trivial(z6);
    int radius = 0;
    switch (t % 5) {
      case 0: sigma = fx::seeded_coboundary(z6, seed); break;
      case 1: sigma = fx::seeded_coboundary(s3, seed); break;
      case 2: sigma = (t % 2) ? multiply(d4_class, fx::seeded_coboundary(d4, seed)) : fx::seeded_coboundary(d4, seed); break;
      case 3: sigma = fx::seeded_coboundary(q8, seed); break;
      default: sigma = fx::seeded_coboundary(f2, seed); radius = 4;
    }
    const Group& g = sigma.group();
    std::uniform_int_distribution<std::size_t> terms(1, 8);
    const auto a = random_algebra_element(g, terms(rng), radius, rng);
    const auto b = random_algebra_element(g, terms(rng), radius, rng);
    const auto lhs = convolve(a, b, sigma);
    const auto rhs = convolve(positive_part(a), positive_part(b), Cocycle::trivial(g));
    for (const auto& [x, v] : lhs.terms()) worst = std::max(worst, std::abs(v) - rhs.coeff(x).real());
  }
  out.require(worst <= 1e-12, "pointwise bound");
  out.detail << total << " triples, max(|lhs| - rhs) = " << fmt(worst);
}

// 2. Twisted ratios bounded by the sampled untwisted constant on Z4 x Z4.
void transfer(Outcome& out) {
  const Group g = fx::product_cyclic({4, 4});
  const std::vector<GroupElement> s{FiniteIndex{4}, FiniteIndex{1}, FiniteIndex{5}};
  const auto sigmas = fx::z4z4_transfer_cocycles(20, 2024);
  for (const auto& c : sigmas) out.require(validate(c).pass, "cocycle validates");
  const auto report = transfer_check(g, s, sigmas, 2024);
  double worst = 0;
  for (const auto& p : report.per_sigma) worst = std::max(worst, p.max_ratio);
  out.require(report.holds, "ratio <= C + 1e-9 for every cocycle");
  out.require(worst <= report.constant + 1e-9, "max ratio");
  // Independent route: exact norms from a directly assembled matrix.
  std::mt19937_64 rng(7);
  double route_gap = 0;
  for (const auto& c : sigmas) {
    const auto a = random_on_support(g, s, rng);
    route_gap = std::max(route_gap, std::abs(operator_norm(oracle_regular_matrix(c, a)) - exact_norm(c, a)));
  }
  out.require(route_gap <= 1e-9, "exact norm agrees with the direct matrix");
  out.detail << "C = " << fmt(report.constant, 10) << ", max twisted ratio = " << fmt(worst, 10) << " over "
             << report.sample_size << " samples x " << sigmas.size() << " cocycles, route gap " << fmt(route_gap);
}

// 3. Exact norm of delta_0 + delta_1 on Z2, twisted and untwisted.
void exact_norm_oracle(Outcome& out) {
  const Group z2 = fx::cyclic(2);
  AlgebraElement a(z2);
  a.add(FiniteIndex{0}, 1.0);
  a.add(FiniteIndex{1}, 1.0);
  const double twisted = exact_norm(Cocycle::from_table(z2, {1, 1, 1, -1}), a);
  const double plain = exact_norm(Cocycle::trivial(z2), a);
  // [[1, -1], [1, 1]] is sqrt(2) times a rotation; [[1, 1], [1, 1]] has eigenvalues 2 and 0.
  out.require(std::abs(twisted - std::sqrt(2.0)) <= 1e-9, "twisted = sqrt 2");
  out.require(std::abs(plain - 2.0) <= 1e-9, "untwisted = 2");
  out.detail << "twisted " << fmt(twisted, 12) << ", untwisted " << fmt(plain, 12);
}

// 4. C[(Z_n)^2, q^{bc}] is a single n x n block.
void clock_shift(Outcome& out) {
  for (int n = 2; n <= 6; ++n) {
    const Cocycle c = fx::clock_shift(n);
    const auto blocks = decompose_blocks(c);
    // Oracle: X^a Z^b realize the cocycle and their n^2 matrices are linearly
    // independent, so the algebra is all of M_n.
    const ComplexMatrix x = fx::shift_matrix(n), z = fx::clock_matrix(n);
    std::vector<ComplexMatrix> u;
    ComplexMatrix xa = ComplexMatrix::identity(n);
    for (int a = 0; a < n; ++a, xa = xa * x) {
      ComplexMatrix zb = ComplexMatrix::identity(n);
      for (int b = 0; b < n; ++b, zb = zb * z) u.push_back(xa * zb);
    }
    const Group& g = c.group();
    double rel = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j) {
        const auto k = g.compose_index(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        rel = std::max(rel, (u[i] * u[j] - c(g.element_at(i), g.element_at(j)) * u[k]).max_abs());
      }
    ComplexMatrix span(u.size(), static_cast<std::size_t>(n * n));
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t e = 0; e < span.cols(); ++e) span(i, e) = u[i].entries()[e];
    const bool oracle = rel < 1e-12 && rank_eps(span, 1e-8) == static_cast<std::size_t>(n * n);
    out.require(oracle, "clock-shift oracle n = " + std::to_string(n));
    out.require(blocks.sorted_sizes() == std::vector<int>{n}, "single block n = " + std::to_string(n));
    out.detail << "n=" << n << ":" << blocks.block_sizes.size() << "x" << blocks.block_sizes.front() << " ";
  }
}

std::vector<std::vector<int>> assembled_multisets(const OrbitDecomposition& orbits) {
  std::vector<std::vector<int>> out;
  for (const auto& s : orbits.summands) {
    auto v = s.assembled_blocks;
    std::sort(v.begin(), v.end());
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// 5. Q8 over its center.
void q8_pipeline(Outcome& out) {
  const auto f = fx::q8_over_center();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  const auto axioms = verify_twisted_action(sys);
  const auto k_blocks = decompose_blocks(sys.sigma_k);
  auto orbits = orbit_decomposition(sys, k_blocks);
  const auto crossed = assemble_crossed_product(sys);
  match_summands(sys, k_blocks, crossed, orbits);
  const auto direct = decompose_blocks(Cocycle::trivial(fx::quaternion8()));
  const auto parts = assembled_multisets(orbits);
  std::vector<int> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  const double residual = std::max({axioms.max_residual(), k_blocks.residuals.max(), orbits.max_residual,
                                    crossed.blocks.residuals.max(), direct.residuals.max()});
  out.require(k_blocks.block_sizes.size() == 2, "2 kernel blocks");
  out.require(orbits.summands.size() == 2, "2 orbits");
  out.require(parts == std::vector<std::vector<int>>{{1, 1, 1, 1}, {2}}, "summands {1,1,1,1} and {2}");
  out.require(all == direct.sorted_sizes(), "union equals blocks of C[Q8]");
  out.require(compare_block_structure(crossed.blocks, direct).equal, "assembled equals direct");
  out.require(residual <= 1e-10, "residuals");
  out.detail << "orbits " << orbits.summands.size() << ", direct {1,1,1,1,2}, max residual " << fmt(residual);
}

// 6. S4 over the Klein four-group.
void s4_orbits(Outcome& out) {
  const auto f = fx::s4_over_klein();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  const auto k_blocks = decompose_blocks(sys.sigma_k);
  auto orbits = orbit_decomposition(sys, k_blocks);
  const auto crossed = assemble_crossed_product(sys);
  match_summands(sys, k_blocks, crossed, orbits);
  std::vector<std::size_t> sizes, indices;
  for (const auto& s : orbits.summands) {
    sizes.push_back(s.blocks.size());
    indices.push_back(s.index);
  }
  std::sort(sizes.begin(), sizes.end());
  std::sort(indices.begin(), indices.end());
  out.require(k_blocks.sorted_sizes() == std::vector<int>{1, 1, 1, 1}, "4 blocks of C[V4]");
  out.require(sizes == std::vector<std::size_t>{1, 3}, "orbit sizes {1,3}");
  out.require(indices == std::vector<std::size_t>{1, 3}, "stabilizer indices {1,3}");
  out.require(crossed.dimension() == 24, "dimension 24");
  out.require(compare_block_structure(crossed.blocks, decompose_blocks(Cocycle::trivial(fx::symmetric(4)))).equal,
              "assembled equals C[S4]");
  out.detail << "orbits {1,3}, indices {1,3}, dimension " << crossed.dimension();
}

// 7. Axioms on every extension fixture; the rejected convention as negative control.
void axioms(Outcome& out) {
  double worst = 0;
  std::size_t runs = 0, rejected_failures = 0;
  const Convention rejected = kDefaultConvention == Convention::conjugated ? Convention::as_printed : Convention::conjugated;
  for (const auto& f : fx::all_extensions())
    for (const auto& c : fx::extension_cocycles(f)) {
      const auto r = verify_twisted_action(induced_action_data(c.sigma, kDefaultConvention));
      worst = std::max(worst, r.max_residual());
      out.require(r.pass, f.name + " " + c.name);
      if (!verify_twisted_action(induced_action_data(c.sigma, rejected)).pass) ++rejected_failures;
      ++runs;
    }
  out.require(worst <= 1e-10, "max residual");
  out.require(rejected_failures > 0, "rejected convention fails somewhere");
  out.detail << runs << " systems under " << to_string(kDefaultConvention) << ", max residual " << fmt(worst) << "; "
             << to_string(rejected) << " fails on " << rejected_failures << "/" << runs;
}

// 8. Truncated norms of the Kesten element on F2.
void kesten(Outcome& out) {
  const Group f2 = Group::free(2);
  AlgebraElement a(f2);
  for (const char* w : {"x1", "x1^-1", "x2", "x2^-1"}) a.add(parse_word(w, 2), 1.0);
  NormOptions o;
  o.threads = worker_threads();
  const double upper = haagerup_upper(a);
  double prev = 0, last = 0;
  bool monotone = true;
  out.detail << "r=2..10:";
  for (int r = 2; r <= 10; ++r) {
    last = truncated_norm_lower(Cocycle::trivial(f2), a, r, o).value;
    monotone = monotone && last >= prev;
    prev = last;
    out.detail << " " << fmt(last, 6);
  }
  out.require(monotone, "monotone in r");
  out.require(last <= upper, "below the sphere bound");
  out.require(last >= 3.39 && last <= 3.4642, "r = 10 value in [3.39, 3.4642]");
  out.detail << "; sphere bound " << fmt(upper) << ", 2 sqrt 3 = " << fmt(2 * std::sqrt(3.0), 6);
}

// 9. r2 sequence of u_x + u_x^-1 against central binomial coefficients.
void r2_binomial(Outcome& out) {
  const Group f2 = Group::free(2);
  AlgebraElement a(f2);
  a.add(parse_word("x1", 2), 1.0);
  a.add(parse_word("x1^-1", 2), 1.0);
  const Cocycle triv = Cocycle::trivial(f2);
  const auto report = l2_spectral_radius(a, triv, 24);
  double binom = 1;
  AlgebraElement p = a;
  bool exact = true;
  double worst = 0;
  for (int n = 1; n <= 24; ++n) {
    binom = binom * (2 * n) * (2 * n - 1) / (n * n);  // exact in double up to n = 24
    if (n > 1) p = convolve(p, a, triv);
    double sum = 0;
    for (const auto& [x, c] : p.terms()) {
      exact = exact && c.imag() == 0 && c.real() == std::round(c.real());
      sum += c.real() * c.real();
    }
    exact = exact && sum == binom;
    const double expected = std::pow(binom, 1.0 / (2 * n));
    worst = std::max(worst, std::abs(report.r2_sequence[n - 1] - expected) / expected);
  }
  const double at24 = report.r2_sequence.back();
  out.require(exact, "integer coefficients with squared norm C(2n, n)");
  out.require(worst <= 1e-14, "sequence equals C(2n,n)^(1/2n)");
  out.require(at24 >= 1.85 && at24 <= 1.90, "n = 24 value in [1.85, 1.90]");
  out.detail << "max rel. deviation " << fmt(worst) << ", n=24 value " << fmt(at24, 8) << " (C(48,24) = " << fmt(binom, 14)
             << ")";
}

// 10. Gauge invariance of norms and of the criterion report.
void gauge_invariance(Outcome& out) {
  std::mt19937_64 rng(10);
  double finite = 0;
  std::uint64_t seed = 500;
  for (const Cocycle& c : {Cocycle::trivial(fx::symmetric(3)), fx::dihedral4_projective(), fx::symmetric4_projective(),
                           Cocycle::trivial(fx::quaternion8()), fx::clock_shift(4)}) {
    for (int t = 0; t < 5; ++t) {
      const auto beta = PhaseFunction::seeded(c.group(), seed++);
      const auto a = random_algebra_element(c.group(), 5, 0, rng);
      finite = std::max(finite, std::abs(exact_norm(multiply(c, Cocycle::from_coboundary(beta)), twistlab::gauge(a, beta)) -
                                         exact_norm(c, a)));
    }
  }
  const Group f2 = Group::free(2);
  const auto beta = PhaseFunction::seeded(f2, 42);
  const Cocycle d = Cocycle::from_coboundary(beta);
  AlgebraElement k(f2);
  for (const char* w : {"x1", "x1^-1", "x2", "x2^-1"}) k.add(parse_word(w, 2), 1.0);
  NormOptions o;
  o.threads = worker_threads();
  double truncated = 0;
  for (int r = 0; r <= 7; ++r)
    truncated = std::max(truncated, std::abs(truncated_norm_lower(d, twistlab::gauge(k, beta), r, o).value -
                                             truncated_norm_lower(Cocycle::trivial(f2), k, r, o).value));

  // Criterion report for sigma = d beta versus the untwisted report of the transported element.
  const auto t = parse_word("x1", 2);
  const std::vector<GroupElement> fset{parse_word("x2", 2), parse_word("x2 x2", 2)};
  AlgebraElement a(f2);
  a.add(parse_word("x1 x2", 2), 1.0);
  a.add(parse_word("x1 x2 x2", 2), 1.0);
  CriterionConfig cfg;
  cfg.max_power = 12;
  cfg.radius = 6;
  cfg.norm = o;
  cfg.elements = {a};
  const auto twisted = criterion_report(d, t, fset, cfg);
  CriterionConfig plain_cfg = cfg;
  plain_cfg.elements = {twistlab::gauge(a, beta.conjugate())};
  const auto plain = criterion_report(Cocycle::trivial(f2), t, fset, plain_cfg);
  double report_gap = std::abs(twisted.samples[0].truncated_norm - plain.samples[0].truncated_norm);
  for (std::size_t n = 0; n < twisted.samples[0].r2_sequence.size(); ++n)
    report_gap = std::max(report_gap, std::abs(twisted.samples[0].r2_sequence[n] - plain.samples[0].r2_sequence[n]));
  out.require(finite <= 1e-9, "finite exact norms");
  out.require(truncated <= 1e-9, "truncated bounds r = 0..7");
  out.require(twisted.gauge_transported && twisted.max_gauge_deviation <= 1e-9, "transported data inside the report");
  out.require(report_gap <= 1e-9, "twisted report matches untwisted report");
  out.detail << "finite " << fmt(finite) << ", truncated " << fmt(truncated) << ", criterion " << fmt(report_gap);
}

// 11. Free subsemigroup certificates.
void semigroup(Outcome& out) {
  const Group f2 = Group::free(2);
  const std::vector<GroupElement> f{parse_word("x2", 2), parse_word("x2 x2", 2)};
  const auto good = certify_free_subsemigroup(f2, parse_word("x1", 2), f, 8);
  const std::vector<GroupElement> inv{parse_word("x1", 2), parse_word("x1^-1", 2)};
  const auto bad = certify_free_subsemigroup(f2, Word{}, inv, 2);
  out.require(good.certified && good.products_checked == 510, "{xy, xy^2} certified to L = 8");
  out.require(!bad.certified && bad.collision && f2.is_identity(*bad.collision), "{x, x^-1} rejected");
  out.require(bad.first_sequence == std::vector<std::size_t>{0, 1} && bad.second_sequence == std::vector<std::size_t>{1, 0},
              "explicit collision");
  out.detail << "certified " << good.products_checked << " products; collision (x)(x^-1) = e = (x^-1)(x)";
}

// 12. Byte-identical CLI output across runs and thread counts.
void determinism(Outcome& out) {
  const std::vector<std::vector<std::string>> commands{
      {"validate", "--group", fixture("group_s4.json"), "--cocycle", fixture("cocycle_s4_projective.json")},
      {"validate", "--group", fixture("group_f2.json"), "--cocycle", fixture("cocycle_f2_coboundary.json"), "--samples", "20000"},
      {"norm", "--group", fixture("group_q8.json"), "--element", fixture("element_q8_sum.json"), "--mode", "exact"},
      {"norm", "--group", fixture("group_f2.json"), "--cocycle", fixture("cocycle_f2_coboundary.json"), "--element",
       fixture("element_f2_sphere1.json"), "--mode", "truncate:6"},
      {"norm", "--group", fixture("group_f2.json"), "--element", fixture("element_f2_sphere1.json"), "--mode", "haagerup"},
      {"transfer", "--group", fixture("group_z4xz4.json"), "--set", fixture("set_z4xz4.json"), "--cocycle",
       fixture("cocycle_z4xz4_0.json"), "--cocycle", fixture("cocycle_z4xz4_1.json")},
      {"specrad", "--group", fixture("group_f2.json"), "--element", fixture("element_f2_x_sum.json"), "--powers", "12"},
      {"specrad", "--group", fixture("group_s3.json"), "--element", fixture("element_s3_transpositions.json"), "--powers", "6"},
      {"semigroup", "--group", fixture("group_f2.json"), "--set", fixture("set_f2_semigroup.json"), "--length", "8"},
      {"criterion", "--group", fixture("group_f2.json"), "--cocycle", fixture("cocycle_f2_coboundary.json"), "--set",
       fixture("set_f2_semigroup.json"), "--powers", "8", "--radius", "5", "--samples", "2"},
      {"decompose", "--group", fixture("group_d4.json"), "--cocycle", fixture("cocycle_d4_projective.json")},
      {"crossed", "--group", fixture("extension_s4_klein.json"), "--cocycle", fixture("extension_s4_klein_coboundary.json"),
       "--verify"},
  };
  auto run = [](std::vector<std::string> args, const std::string& threads) {
    args.push_back("--seed");
    args.push_back("3");
    args.push_back("--threads");
    args.push_back(threads);
    std::string cmd = "'" TWISTLAB_CLI "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n;
    while (pipe && (n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int raw = pipe ? pclose(pipe) : -1;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
  };
  std::size_t identical = 0;
  for (const auto& c : commands) {
    const auto a = run(c, "1"), b = run(c, "1"), t = run(c, "4");
    const bool same = a.status == 0 && !a.out.empty() && a.out == b.out && a.out == t.out && a.status == t.status;
    out.require(same, c.front() + " output stable");
    identical += same;
  }
  out.detail << identical << "/" << commands.size() << " commands byte-identical (threads 1, 1, 4)";
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "majorization", 10, majorization},
      {2, "transfer", 30, transfer},
      {3, "exact-norm oracle", 0, exact_norm_oracle},
      {4, "clock-shift blocks", 20, clock_shift},
      {5, "Q8 pipeline", 5, q8_pipeline},
      {6, "S4/V4 orbits", 10, s4_orbits},
      {7, "twisted-action axioms", 0, axioms},
      {8, "Kesten truncation", 60, kesten},
      {9, "r2 binomial oracle", 20, r2_binomial},
      {10, "gauge invariance", 0, gauge_invariance},
      {11, "free subsemigroup", 0, semigroup},
      {12, "CLI determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) out.require(false, "runtime over " + fmt(c.budget_s) + " s");
    failed += !out.pass;
    std::printf("%s %2d %-22s %7.2fs  %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
