#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "twistlab/crossed.hpp"
#include "twistlab/error.hpp"
#include "twistlab/fixtures.hpp"

using namespace twistlab;
namespace fx = twistlab::fixtures;

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

const fx::NamedCocycle& named(const std::vector<fx::NamedCocycle>& list, const std::string& name) {
  for (const auto& c : list)
    if (c.name == name) return c;
  FAIL("missing cocycle " << name);
  return list.front();
}

}  // namespace

TEST_CASE("convention names") {
  CHECK(to_string(Convention::as_printed) == "as-printed");
  CHECK(to_string(Convention::conjugated) == "conjugated");
  CHECK(convention_from_string("conjugated") == Convention::conjugated);
  CHECK(convention_from_string("as-printed") == Convention::as_printed);
  CHECK_THROWS_AS(convention_from_string("other"), Error);
  CHECK(kDefaultConvention == Convention::conjugated);
}

TEST_CASE("trivial cocycle gives pure conjugation and kappa") {
  for (const auto& f : fx::all_extensions()) {
    const Group& gamma = f.gamma;
    const auto& ext = gamma.extension();
    const auto sys = induced_action_data(Cocycle::trivial(gamma));
    const std::size_t nk = ext.k.order(), nl = ext.lambda.order();
    REQUIRE(sys.alpha.size() == nl);
    bool ok = true;
    for (std::uint32_t h = 0; h < nl; ++h) {
      const GroupElement s{ExtPair{0, h}};
      for (std::uint32_t k = 0; k < nk; ++k) {
        const auto conj = gamma.compose(gamma.compose(s, ExtPair{k, 0}), gamma.invert(s));
        const auto target = conj.get_if<ExtPair>()->k;
        for (std::size_t r = 0; r < nk; ++r) ok = ok && sys.alpha[h](r, k) == Complex(r == target ? 1.0 : 0.0);
      }
    }
    CHECK(ok);
    for (std::uint32_t h1 = 0; h1 < nl; ++h1)
      for (std::uint32_t h2 = 0; h2 < nl; ++h2) {
        const auto kappa = ext.factor_set[h1 * nl + h2];
        CHECK(sys.rho_at(h1, h2) == AlgebraElement::delta(sys.k, sys.k.element_at(kappa)));
      }
  }
}

TEST_CASE("Q8 system: central kernel acts trivially") {
  const auto f = fx::q8_over_center();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  for (const auto& a : sys.alpha) CHECK(a == ComplexMatrix::identity(2));
  bool has_minus = false;
  for (const auto& r : sys.rho) has_minus = has_minus || r.coeff(sys.k.element_at(1)) == Complex(1);
  CHECK(has_minus);
  const auto report = verify_twisted_action(sys);
  CHECK(report.pass);
  CHECK(report.max_residual() == 0.0);
}

TEST_CASE("direct product with trivial data is a genuine action") {
  const auto f = fx::z2z2_direct();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  for (const auto& r : sys.rho) CHECK(r == AlgebraElement::delta(sys.k, sys.k.identity()));
  CHECK(verify_twisted_action(sys).max_residual() == 0.0);
}

TEST_CASE("clock-shift extension picks up phases") {
  const auto f = fx::z3z3_over_z3();
  const auto sigma = named(fx::extension_cocycles(f), "table").sigma;
  const auto sys = induced_action_data(sigma);
  // Kernel {(a, 0)} restricts to the trivial cocycle; some alpha_h carries a nontrivial phase.
  for (auto v : sys.sigma_k.tabulate()) CHECK(std::abs(v - Complex(1)) < 1e-12);
  double max_phase = 0;
  for (const auto& a : sys.alpha)
    for (auto z : a.entries())
      if (std::abs(z) > 0.5) max_phase = std::max(max_phase, std::abs(z - Complex(1)));
  CHECK(max_phase > 0.5);
  CHECK(verify_twisted_action(sys).pass);
}

TEST_CASE("every extension fixture satisfies the axioms under the default convention") {
  for (const auto& f : fx::all_extensions())
    for (const auto& c : fx::extension_cocycles(f)) {
      INFO(f.name << " " << c.name);
      const auto report = verify_twisted_action(induced_action_data(c.sigma));
      CHECK(report.pass);
      CHECK(report.max_residual() <= 1e-10);
    }
}

TEST_CASE("the as-printed formulas fail for a nontrivial coboundary") {
  const auto f = fx::q8_over_center();
  const auto sigma = fx::seeded_coboundary(f.gamma, 11);
  const auto bad = verify_twisted_action(induced_action_data(sigma, Convention::as_printed));
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.failures.empty());
  const auto good = verify_twisted_action(induced_action_data(sigma, Convention::conjugated));
  CHECK(good.pass);
}

TEST_CASE("a corrupted rho fails the cocycle axiom") {
  const auto f = fx::q8_over_center();
  auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  sys.rho[1 * sys.lambda_order() + 2] = sys.rho[1 * sys.lambda_order() + 2].scaled(-1.0);
  const auto report = verify_twisted_action(sys);
  CHECK_FALSE(report.pass);
  CHECK(report.cocycle == doctest::Approx(2.0).epsilon(1e-12));
  bool witnessed = false;
  for (const auto& w : report.failures) witnessed = witnessed || w.axiom == "cocycle";
  CHECK(witnessed);
}

TEST_CASE("block decompositions of small algebras") {
  const auto s3 = decompose_blocks(Cocycle::trivial(fx::symmetric(3)));
  CHECK(s3.sorted_sizes() == std::vector<int>{1, 1, 2});
  CHECK(s3.center_dimension == 3);
  CHECK(s3.residuals.max() <= 1e-9);

  const Group z2 = fx::cyclic(2);
  const auto d = decompose_blocks(Cocycle::trivial(z2));
  CHECK(d.sorted_sizes() == std::vector<int>{1, 1});
  for (const auto& p : d.projections) {
    CHECK(std::abs(p.coeff(FiniteIndex{0}) - Complex(0.5)) < 1e-12);
    CHECK(std::abs(std::abs(p.coeff(FiniteIndex{1})) - 0.5) < 1e-12);
  }

  for (int n = 2; n <= 6; ++n) {
    const auto b = decompose_blocks(fx::clock_shift(n));
    CHECK(b.sorted_sizes() == std::vector<int>{n});
  }
  CHECK(decompose_blocks(Cocycle::trivial(fx::quaternion8())).sorted_sizes() == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(decompose_blocks(fx::dihedral4_projective()).sorted_sizes() == std::vector<int>{2, 2});
  CHECK(decompose_blocks(fx::symmetric4_projective()).sorted_sizes() == std::vector<int>{2, 2, 4});
  CHECK(decompose_blocks(Cocycle::trivial(fx::symmetric(4))).sorted_sizes() == std::vector<int>{1, 1, 2, 3, 3});
}

TEST_CASE("decompositions are invariant under coboundary twists and seeds") {
  for (const Group& g : {fx::symmetric(3), fx::dihedral4(), fx::quaternion8()}) {
    const auto base = decompose_blocks(Cocycle::trivial(g)).sorted_sizes();
    DecomposeOptions o;
    o.seed = 1234;
    CHECK(decompose_blocks(fx::seeded_coboundary(g, 8), o).sorted_sizes() == base);
  }
}

TEST_CASE("sum of squared block sizes is the dimension") {
  for (const auto& f : fx::all_extensions())
    for (const auto& c : fx::extension_cocycles(f)) {
      const auto b = decompose_blocks(c.sigma);
      int total = 0;
      for (int n : b.block_sizes) total += n * n;
      CHECK(static_cast<std::size_t>(total) == f.gamma.order());
      CHECK(b.residuals.max() <= 1e-9);
    }
}

TEST_CASE("Q8 orbits and reassembly") {
  const auto f = fx::q8_over_center();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  const auto k_blocks = decompose_blocks(sys.sigma_k);
  CHECK(k_blocks.sorted_sizes() == std::vector<int>{1, 1});
  auto orbits = orbit_decomposition(sys, k_blocks);
  REQUIRE(orbits.summands.size() == 2);
  for (const auto& s : orbits.summands) {
    CHECK(s.blocks.size() == 1);
    CHECK(s.stabilizer.size() == 4);
    CHECK(s.index == 1);
    CHECK(s.block_size == 1);
  }
  const auto crossed = assemble_crossed_product(sys);
  CHECK(crossed.dimension() == 8);
  match_summands(sys, k_blocks, crossed, orbits);
  std::vector<std::vector<int>> assembled;
  for (const auto& s : orbits.summands) assembled.push_back(sorted(s.assembled_blocks));
  std::sort(assembled.begin(), assembled.end());
  CHECK(assembled == std::vector<std::vector<int>>{{1, 1, 1, 1}, {2}});
  CHECK(compare_block_structure(crossed.blocks, decompose_blocks(Cocycle::trivial(fx::quaternion8()))).equal);
}

TEST_CASE("S4 over the Klein group") {
  const auto f = fx::s4_over_klein();
  const auto sys = induced_action_data(Cocycle::trivial(f.gamma));
  const auto k_blocks = decompose_blocks(sys.sigma_k);
  CHECK(k_blocks.sorted_sizes() == std::vector<int>{1, 1, 1, 1});
  auto orbits = orbit_decomposition(sys, k_blocks);
  std::vector<std::size_t> sizes, indices;
  for (const auto& s : orbits.summands) {
    sizes.push_back(s.blocks.size());
    indices.push_back(s.index);
    CHECK(s.blocks.size() * s.stabilizer.size() == sys.lambda_order());
    CHECK(s.green_dimension == s.dimension);
  }
  std::sort(sizes.begin(), sizes.end());
  std::sort(indices.begin(), indices.end());
  CHECK(sizes == std::vector<std::size_t>{1, 3});
  CHECK(indices == std::vector<std::size_t>{1, 3});
  const auto crossed = assemble_crossed_product(sys);
  CHECK(crossed.dimension() == 24);
  match_summands(sys, k_blocks, crossed, orbits);
  std::vector<std::vector<int>> assembled;
  for (const auto& s : orbits.summands) assembled.push_back(sorted(s.assembled_blocks));
  std::sort(assembled.begin(), assembled.end());
  CHECK(assembled == std::vector<std::vector<int>>{{1, 1, 2}, {3, 3}});
}

TEST_CASE("direct product blocks are pairwise products") {
  const auto f = fx::z2z2_direct();
  const auto crossed = assemble_crossed_product(induced_action_data(Cocycle::trivial(f.gamma)));
  CHECK(crossed.blocks.sorted_sizes() == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("clock-shift crossed product is a single block") {
  const auto f = fx::z3z3_over_z3();
  const auto sigma = named(fx::extension_cocycles(f), "table").sigma;
  const auto crossed = assemble_crossed_product(induced_action_data(sigma));
  CHECK(crossed.blocks.sorted_sizes() == std::vector<int>{3});
  CHECK(compare_block_structure(crossed.blocks, decompose_blocks(sigma)).equal);
}

TEST_CASE("crossed products match the twisted group algebra on every fixture") {
  for (const auto& f : fx::all_extensions())
    for (const auto& c : fx::extension_cocycles(f)) {
      INFO(f.name << " " << c.name);
      const auto sys = induced_action_data(c.sigma);
      const auto k_blocks = decompose_blocks(sys.sigma_k);
      auto orbits = orbit_decomposition(sys, k_blocks);
      CHECK(orbits.max_residual <= 1e-9);
      const auto crossed = assemble_crossed_product(sys);
      CHECK(sys.k_order() * sys.lambda_order() == f.gamma.order());
      CHECK(crossed.dimension() == f.gamma.order());
      match_summands(sys, k_blocks, crossed, orbits);
      std::size_t total = 0, dims = 0;
      for (const auto& s : orbits.summands) {
        for (int n : s.assembled_blocks) total += static_cast<std::size_t>(n * n);
        dims += s.dimension;
      }
      CHECK(total == f.gamma.order());
      CHECK(dims == f.gamma.order());
      CHECK(compare_block_structure(crossed.blocks, decompose_blocks(c.sigma)).equal);
    }
}

TEST_CASE("compare block structure") {
  CHECK(compare_block_structure({1, 1, 2}, {2, 1, 1}).equal);
  const auto diff = compare_block_structure({1, 1, 2}, {1, 3});
  CHECK_FALSE(diff.equal);
  CHECK(diff.only_first == std::vector<int>{1, 2});
  CHECK(diff.only_second == std::vector<int>{3});
}

TEST_CASE("regular algebra agrees with twisted convolution") {
  const Cocycle sigma = fx::dihedral4_projective();
  const auto alg = twisted_group_algebra(sigma);
  const Group& g = sigma.group();
  std::mt19937_64 rng(3);
  const auto a = random_on_support(g, g.elements(), rng), b = random_on_support(g, g.elements(), rng);
  std::vector<Complex> da(g.order()), db(g.order());
  for (const auto& [x, c] : a.terms()) da[g.index_of(x)] = c;
  for (const auto& [x, c] : b.terms()) db[g.index_of(x)] = c;
  const auto prod = alg.multiply(da, db);
  const auto expected = convolve(a, b, sigma);
  double worst = 0;
  for (std::size_t i = 0; i < prod.size(); ++i) worst = std::max(worst, std::abs(prod[i] - expected.coeff(g.element_at(i))));
  CHECK(worst < 1e-12);
  const auto st = alg.star(da);
  const auto inv = involute(a, sigma);
  worst = 0;
  for (std::size_t i = 0; i < st.size(); ++i) worst = std::max(worst, std::abs(st[i] - inv.coeff(g.element_at(i))));
  CHECK(worst < 1e-12);
}

TEST_CASE("invertible elements are dense in assembled algebras") {
  for (const auto& f : fx::all_extensions()) {
    const auto crossed = assemble_crossed_product(induced_action_data(fx::extension_cocycles(f).back().sigma));
    const auto check = invertible_density(crossed.algebra, 100, 17);
    CHECK(check.pass());
    CHECK(check.samples == 100);
    CHECK(check.max_perturbation <= 1e-6);
    CHECK(check.max_perturbation > 0.0);
  }
}
