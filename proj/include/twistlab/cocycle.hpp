#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "twistlab/group.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {

/// A phase function beta: G -> S^1 with beta(e) = 1.
class PhaseFunction {
 public:
  /// One unit-modulus value per element of a finite group, in index order.
  static PhaseFunction table(const Group& g, std::vector<Complex> values);
  /// beta(g) = exp(2 pi i sum_j angles[j] * e_j(g)), e_j the exponent sum
  /// (free) or coordinate (int-lattice) of generator j.
  static PhaseFunction character(const Group& g, std::vector<double> angles);
  /// Deterministic pseudo-random phase per element, derived from the seed.
  static PhaseFunction seeded(const Group& g, std::uint64_t seed);
  /// Explicit values on finitely many elements, 1 elsewhere.
  static PhaseFunction map(const Group& g, std::map<GroupElement, Complex> values);

  Complex operator()(const GroupElement& g) const;
  const Group& group() const;
  PhaseFunction conjugate() const;
  PhaseFunction times(const PhaseFunction& other) const;

  Json to_json() const;
  static PhaseFunction from_json(const Group& g, const Json& j);

  struct Impl;

 private:
  explicit PhaseFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Normalized S^1-valued 2-cocycle on a group. Immutable; evaluation is pure.
class Cocycle {
 public:
  static Cocycle trivial(const Group& g);
  /// Row-major |G| x |G| values. Inputs with sigma(e,e) != 1 are rescaled by
  /// 1/sigma(e,e); whether that happened is reported by auto_normalized().
  static Cocycle from_table(const Group& g, std::vector<Complex> values);
  /// sigma(x, y) = exp(2 pi i <x, Theta y>) on an int-lattice.
  static Cocycle from_bicharacter(const Group& g, std::vector<std::vector<double>> theta);
  /// d beta(x, y) = conj(beta(x)) conj(beta(y)) beta(xy).
  static Cocycle from_coboundary(const PhaseFunction& beta);
  /// tau(pi(x), pi(y)) for the quotient map pi(k, h) = h of an extension.
  static Cocycle pullback(const Group& extension, const Cocycle& on_quotient);

  Complex operator()(const GroupElement& x, const GroupElement& y) const;
  const Group& group() const;

  std::string kind() const;
  bool is_trivial() const;
  bool auto_normalized() const;
  /// beta when this cocycle is exactly d beta.
  std::optional<PhaseFunction> coboundary_phase() const;

  /// Dense |G| x |G| table (finite groups).
  std::vector<Complex> tabulate() const;

  Json to_json() const;
  static Cocycle from_json(const Group& g, const Json& j);

  struct Impl;

 private:
  explicit Cocycle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Cocycle multiply(const Cocycle&, const Cocycle&);
  friend Cocycle conjugate(const Cocycle&);
};

Cocycle multiply(const Cocycle& a, const Cocycle& b);
Cocycle conjugate(const Cocycle& a);

struct CocycleWitness {
  std::string check;  // "modulus", "normalization" or "identity"
  std::vector<GroupElement> elements;
  double residual = 0.0;
};

struct ValidationReport {
  bool pass = false;
  bool exhaustive = false;
  bool auto_normalized = false;
  std::size_t triples_checked = 0;
  double tolerance = 1e-12;
  double modulus_residual = 0.0;
  double normalization_residual = 0.0;
  double identity_residual = 0.0;
  std::vector<CocycleWitness> failures;  // first few only

  Json to_json(const Group& g) const;
};

struct ValidateOptions {
  double tolerance = 1e-12;
  std::size_t samples = 100000;
  int radius = 6;
  std::uint64_t seed = 1;
  std::size_t max_witnesses = 8;
};

/// Exhaustive over finite groups, sampled triples within the given radius otherwise.
ValidationReport validate(const Cocycle& sigma, const ValidateOptions& options = {});

/// Restriction to a finite subgroup given by its elements. The result lives on a
/// finite-table group whose index i is the i-th element in sorted order.
/// Throws NotASubgroup with a witness pair.
Cocycle restrict(const Cocycle& sigma, std::span<const GroupElement> subgroup);

/// Sorted, de-duplicated subgroup elements and the finite-table group they form.
struct SubgroupTable {
  std::vector<GroupElement> elements;
  Group group;
};
SubgroupTable subgroup_table(const Group& g, std::span<const GroupElement> subgroup);

/// Seeded element of word length <= radius (uniform over finite groups).
GroupElement random_element(const Group& g, int radius, std::mt19937_64& rng);

}  // namespace twistlab
