#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistlab/cocycle.hpp"
#include "twistlab/group.hpp"
#include "twistlab/linalg.hpp"

// Small groups, cocycles and extensions used by tests, the acceptance suite
// and the fixture generator. Everything here is built from first principles
// (permutations, quaternions, explicit matrices) so that it can serve as an
// oracle for the library code.
namespace twistlab::fixtures {

Group cyclic(int n);
/// Z_{n_0} x ... x Z_{n_{d-1}}, element (x_0, ..., x_{d-1}) at mixed-radix index
/// sum x_i prod_{j > i} n_j.
Group product_cyclic(const std::vector<int>& moduli);
std::vector<int> product_coordinates(const std::vector<int>& moduli, std::size_t index);
std::size_t product_index(const std::vector<int>& moduli, const std::vector<int>& coords);

using Permutation = std::vector<int>;
/// Closure of the generators, sorted lexicographically (identity first).
std::vector<Permutation> permutation_closure(const std::vector<Permutation>& generators);
Group permutation_group(const std::vector<Permutation>& elements);
std::vector<Permutation> symmetric_elements(int n);
Group symmetric(int n);

/// Symmetries of a square on vertices 0..3: r^a s^b acts by x -> a + (b ? -x : x) mod 4.
std::vector<Permutation> dihedral4_elements();
Group dihedral4();
/// D4 element r^a s^b.
std::size_t dihedral4_index(int a, int b);

/// Unit quaternions ordered 1, -1, i, -i, j, -j, k, -k.
Group quaternion8();

/// sigma(x, y) = exp(2 pi i x^T M y / n) on (Z_n)^d.
Cocycle bicharacter(const Group& g, int n, const std::vector<std::vector<int>>& m);
/// q^{bc} on (Z_n)^2: sigma((a, b), (c, d)) = exp(2 pi i b c / n).
Cocycle clock_shift(int n);
/// Clock and shift matrices X (shift) and Z (clock) with Z X = q X Z; the
/// projective representation (a, b) -> X^a Z^b realizes clock_shift(n).
ComplexMatrix shift_matrix(int n);
ComplexMatrix clock_matrix(int n);

/// Cocycle of a projective representation given by one matrix per element:
/// sigma(g, h) = U(g) U(h) U(gh)^{-1}, which must be scalar.
Cocycle cocycle_from_projective(const Group& g, const std::vector<ComplexMatrix>& lifts);
/// Nontrivial class on D4 from the lifts r -> diag(e^{-i pi/4}, e^{i pi/4}), s -> -i sigma_x.
Cocycle dihedral4_projective();
/// Nontrivial class on S4 from the binary octahedral group.
Cocycle symmetric4_projective();

/// d beta for a seeded phase function.
Cocycle seeded_coboundary(const Group& g, std::uint64_t seed);

/// A concrete finite group G presented as an extension of K by G/K.
struct ExtensionFixture {
  std::string name;
  Group g;
  Group gamma;                               // extension backend
  std::vector<std::uint32_t> to_extension;   // G index -> gamma index
  std::vector<std::uint32_t> from_extension;  // gamma index -> G index
  std::size_t k_order = 0;
  std::size_t lambda_order = 0;

  /// Cocycle on gamma with the same values as sigma through the identification.
  Cocycle transport(const Cocycle& sigma_on_g) const;
};

/// K is given by G indices (a normal subgroup); section lists one G index per
/// coset, identity first. An empty section picks the smallest index per coset.
ExtensionFixture extension_from_group(const std::string& name, const Group& g, const std::vector<std::uint32_t>& k,
                                      std::vector<std::uint32_t> section = {});

ExtensionFixture q8_over_center();
ExtensionFixture d4_over_center();
ExtensionFixture s4_over_klein();
ExtensionFixture z3z3_over_z3();
ExtensionFixture z2z2_direct();

struct NamedCocycle {
  std::string name;
  Cocycle sigma;
};

/// Trivial, a seeded coboundary, and the nontrivial table cocycle where one exists.
std::vector<NamedCocycle> extension_cocycles(const ExtensionFixture& f, std::uint64_t seed = 11);

std::vector<ExtensionFixture> all_extensions();

/// Seeded bicharacter x coboundary cocycles on Z4 x Z4 (transfer suite).
std::vector<Cocycle> z4z4_transfer_cocycles(std::size_t count, std::uint64_t seed);

}  // namespace twistlab::fixtures
