#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/algebra.hpp"
#include "twistlab/cocycle.hpp"
#include "twistlab/group.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {

/// Placement of the complex conjugate in alpha_h(u_k) = sigma(s, k) c(sigma(s k s^-1, s)) u_{s k s^-1}:
/// as_printed uses c = id, conjugated uses c = conj.
enum class Convention { as_printed, conjugated };

/// Frozen choice: the variant that passes verify_twisted_action on the Q8
/// fixture with a nontrivial coboundary (the other one fails there).
constexpr Convention kDefaultConvention = Convention::conjugated;

std::string_view to_string(Convention c);
/// "as-printed" or "conjugated"; throws InvalidArgument otherwise.
Convention convention_from_string(std::string_view s);

/// Twisted action (alpha, rho) of Lambda on C[K, sigma_K] with K the kernel of an extension.
struct TwistedSystem {
  Group k;             // finite-table copy of the kernel, index i <-> (i, e)
  Group lambda;
  Cocycle sigma_k;     // restriction of sigma to K
  std::vector<ComplexMatrix> alpha;  // alpha[h], column j = coefficients of alpha_h(u_j)
  std::vector<AlgebraElement> rho;   // rho[h1 * |Lambda| + h2]
  Convention convention = kDefaultConvention;

  std::size_t k_order() const { return k.order(); }
  std::size_t lambda_order() const { return lambda.order(); }
  const AlgebraElement& rho_at(std::size_t h1, std::size_t h2) const { return rho[h1 * lambda_order() + h2]; }

  Json to_json() const;
};

/// Evaluates alpha and rho from the section s(h) = (e, h); no axiom check.
TwistedSystem induced_action_data(const Cocycle& sigma, Convention convention = kDefaultConvention);

struct AxiomWitness {
  std::string axiom;
  std::vector<std::size_t> lambda_indices;  // h's involved
  std::optional<std::size_t> k_index;       // basis vector, when relevant
  double residual = 0.0;
};

struct AxiomReport {
  double automorphism = 0.0;   // unital, multiplicative, *-preserving
  double unitarity = 0.0;      // rho(h1, h2) unitary
  double normalization = 0.0;  // alpha_e = id, rho(e, h) = rho(h, e) = delta_e
  double composition = 0.0;    // alpha_h1 alpha_h2 = Ad(rho(h1, h2)) alpha_h1h2
  double cocycle = 0.0;        // alpha_h1(rho(h2, h3)) rho(h1, h2h3) = rho(h1, h2) rho(h1h2, h3)
  double tolerance = 1e-10;
  bool pass = false;
  std::vector<AxiomWitness> failures;  // largest residual per failing axiom

  double max_residual() const;
  Json to_json() const;
};

AxiomReport verify_twisted_action(const TwistedSystem& sys, double tolerance = 1e-10);

struct BlockResiduals {
  double idempotent = 0.0;
  double self_adjoint = 0.0;
  double orthogonal = 0.0;
  double completeness = 0.0;
  double central = 0.0;

  double max() const;
};

/// Minimal central projections of a finite-dimensional semisimple algebra and
/// the matrix size of each block, sorted by (size, coefficients).
struct BlockDecomposition {
  std::vector<AlgebraElement> projections;
  std::vector<int> block_sizes;
  std::size_t center_dimension = 0;
  std::size_t attempts = 0;
  std::uint64_t seed = 0;
  BlockResiduals residuals;

  std::vector<int> sorted_sizes() const;
  Json to_json(bool with_projections = true) const;
};

struct DecomposeOptions {
  std::uint64_t seed = 7;
  std::size_t retries = 5;
  double cluster_gap = 1e-8;
  double rank_eps = 1e-8;
};

/// Algebra given by its left-regular matrices: left[j] is multiplication by
/// basis vector j on the algebra itself, in an orthonormal basis for which the
/// regular representation is a *-representation; basis vector `unit` is 1.
struct RegularAlgebra {
  Group carrier;  // basis vector j <-> carrier.element_at(j)
  std::vector<ComplexMatrix> left;
  std::size_t unit = 0;

  std::size_t dim() const { return left.size(); }
  ComplexMatrix left_of(std::span<const Complex> x) const;
  std::vector<Complex> multiply(std::span<const Complex> x, std::span<const Complex> y) const;
  std::vector<Complex> star(std::span<const Complex> x) const;
};

RegularAlgebra twisted_group_algebra(const Cocycle& sigma);

/// Throws DegenerateAfterRetries when no random central element separates the blocks.
BlockDecomposition decompose_algebra(const RegularAlgebra& algebra, const DecomposeOptions& options = {});
BlockDecomposition decompose_blocks(const Cocycle& sigma, const DecomposeOptions& options = {});

struct Summand {
  std::vector<std::size_t> blocks;      // indices into the K decomposition
  std::size_t base_block = 0;
  std::vector<std::size_t> stabilizer;  // Lambda indices fixing the base block
  std::size_t index = 0;                // [Lambda : stabilizer]
  int block_size = 0;
  std::size_t dimension = 0;            // |orbit| n^2 |Lambda|
  std::size_t green_dimension = 0;      // |stabilizer| n^2 index^2
  std::vector<int> assembled_blocks;    // filled by match_summands

  Json to_json() const;
};

struct OrbitDecomposition {
  std::vector<std::vector<std::size_t>> permutation;  // permutation[h][i] = j with alpha_h(p_i) = p_j
  std::vector<Summand> summands;
  double max_residual = 0.0;

  Json to_json() const;
};

/// Throws NotPermuting when some alpha_h(p_i) is not within tol of any p_j.
OrbitDecomposition orbit_decomposition(const TwistedSystem& sys, const BlockDecomposition& blocks, double tol = 1e-8);

struct CrossedProduct {
  RegularAlgebra algebra;  // basis u_k v_h at index k + |K| h
  BlockDecomposition blocks;

  std::size_t dimension() const { return algebra.dim(); }
};

CrossedProduct assemble_crossed_product(const TwistedSystem& sys, const DecomposeOptions& options = {});

/// Assigns every block of the crossed product to the summand whose orbit
/// projection fixes it. Throws NotPermuting when a block fits no summand.
void match_summands(const TwistedSystem& sys, const BlockDecomposition& k_blocks, const CrossedProduct& crossed,
                    OrbitDecomposition& orbits, double tol = 1e-8);

struct BlockComparison {
  bool equal = false;
  std::vector<int> only_first;
  std::vector<int> only_second;

  Json to_json() const;
};

BlockComparison compare_block_structure(const std::vector<int>& first, const std::vector<int>& second);
BlockComparison compare_block_structure(const BlockDecomposition& first, const BlockDecomposition& second);

struct InvertibilityCheck {
  std::size_t samples = 0;
  std::size_t reached = 0;            // samples made invertible within the budget
  double max_perturbation = 0.0;      // largest shift actually needed
  double budget = 1e-6;

  bool pass() const { return reached == samples; }
  Json to_json() const;
};

/// For random x, finds the smallest shift t in {0, 1e-8, ..., 1e-6} with
/// L(x) + t 1 invertible (smallest singular value above 1e-12 |L(x)|).
InvertibilityCheck invertible_density(const RegularAlgebra& algebra, std::size_t samples, std::uint64_t seed,
                                      double budget = 1e-6);

}  // namespace twistlab
