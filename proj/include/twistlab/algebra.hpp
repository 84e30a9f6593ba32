#pragma once

#include <cstddef>
#include <map>
#include <random>

#include "twistlab/cocycle.hpp"
#include "twistlab/group.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {

/// Finitely supported coefficient map G -> C. The same value type serves the
/// group algebra CG and every twisted algebra C(G, sigma); the product is
/// chosen per call by passing a cocycle. Coefficients with modulus below
/// 1e-300 are dropped.
class AlgebraElement {
 public:
  using Terms = std::map<GroupElement, Complex>;

  explicit AlgebraElement(Group g) : group_(std::move(g)) {}
  AlgebraElement(Group g, Terms terms);

  static AlgebraElement delta(const Group& g, const GroupElement& x, Complex c = 1.0);

  const Group& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coeff(const GroupElement& x) const;

  /// Adds c at x (validating membership) and drops the term if it cancels.
  void add(const GroupElement& x, Complex c);

  AlgebraElement scaled(Complex s) const;
  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;

  /// Largest word length over the support (0 for finite groups).
  std::size_t max_word_length() const;

  Json to_json() const;
  /// Accepts {"group": ..., "terms": [...]} or a bare term list.
  static AlgebraElement from_json(const Group& g, const Json& j);

  bool operator==(const AlgebraElement& other) const { return group_ == other.group_ && terms_ == other.terms_; }

 private:
  Group group_;
  Terms terms_;
};

constexpr double kDropThreshold = 1e-300;

/// (a *_sigma b)_g = sum_{xy = g} sigma(x, y) a_x b_y.
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& sigma);
/// (a*)_h = conj(sigma(h^-1, h)) conj(a_{h^-1}).
AlgebraElement involute(const AlgebraElement& a, const Cocycle& sigma);
/// Coefficientwise modulus.
AlgebraElement positive_part(const AlgebraElement& a);

double l2_norm(const AlgebraElement& a);
double l1_norm(const AlgebraElement& a);
double l1_distance(const AlgebraElement& a, const AlgebraElement& b);

/// n-fold left-associated twisted power; throws MemoryBudgetExceeded when a
/// support exceeds support_cap.
AlgebraElement power(const AlgebraElement& a, int n, const Cocycle& sigma, std::size_t support_cap = 2'000'000);

/// Gauge map T_beta(a)_g = beta(g) a_g. It intertwines *_sigma with
/// *_{sigma d beta}.
AlgebraElement gauge(const AlgebraElement& a, const PhaseFunction& beta);

/// Seeded element with `terms` random complex coefficients on random elements of
/// word length <= radius.
AlgebraElement random_algebra_element(const Group& g, std::size_t terms, int radius, std::mt19937_64& rng);
/// Seeded complex coefficients on the given support.
AlgebraElement random_on_support(const Group& g, const std::vector<GroupElement>& support, std::mt19937_64& rng);

}  // namespace twistlab
