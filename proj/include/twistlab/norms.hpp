#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistlab/algebra.hpp"
#include "twistlab/cocycle.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {

/// Resource and iteration settings shared by the norm computations.
struct NormOptions {
  std::size_t mem_cap = 2'000'000;  // basis elements (balls) or support size (powers)
  unsigned threads = 1;
  std::size_t max_iterations = 100000;
  double converged_threshold = 1e-15;
  std::uint64_t seed = 0x5eed;
};

/// Matrix of b -> a *_sigma b on l2(G) in the enumeration basis: column h holds
/// sigma(g, h) a_g at row gh.
ComplexMatrix regular_rep(const Cocycle& sigma, const AlgebraElement& a);

/// ||a|| in C*_red(G, sigma) for finite G.
double exact_norm(const Cocycle& sigma, const AlgebraElement& a);

struct TruncatedNorm {
  double value = 0.0;  // certified lower bound on the reduced norm
  int radius = 0;
  std::size_t domain_size = 0;
  std::size_t codomain_size = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Norm of b -> a *_sigma b from l2(B_r) to l2(B_{r + max |supp a|}). For
/// finite groups the ball is the whole group and the value is exact.
TruncatedNorm truncated_norm_lower(const Cocycle& sigma, const AlgebraElement& a, int radius,
                                   const NormOptions& options = {});

/// sum_n (n + 1) ||a_n||_2 over spheres of a free group.
double haagerup_upper(const AlgebraElement& a);

struct NormEstimate {
  double lower = 0.0;
  std::optional<double> upper;
  std::string lower_method;
  std::string upper_method;
  std::optional<int> radius;
  std::size_t iterations = 0;

  Json to_json() const;
};

struct TransferSigmaResult {
  double max_ratio = 0.0;
  bool holds = false;
};

struct TransferReport {
  double constant = 0.0;  // sampled untwisted C
  std::size_t sample_size = 0;
  std::vector<TransferSigmaResult> per_sigma;
  bool holds = false;
  double tolerance = 1e-9;

  Json to_json() const;
};

/// Sampled constant C over elements supported on S (all-ones, random complex,
/// every delta) and the twisted ratios for each cocycle on the same sample.
TransferReport transfer_check(const Group& g, std::span<const GroupElement> support, std::span<const Cocycle> sigmas,
                              std::uint64_t seed, std::size_t random_samples = 50);

struct SpectralReport {
  std::vector<double> r2_sequence;  // ||a^n||_2^{1/n}, n = 1..N
  double r2_estimate = 0.0;         // value at n = N
  std::optional<double> r_sigma;    // finite groups: max |eigenvalue|
  std::string r_sigma_method;
  bool normal = false;

  Json to_json() const;
};

/// The r2 part: the full sequence of twisted power norms.
SpectralReport l2_spectral_radius(const AlgebraElement& a, const Cocycle& sigma, int max_power,
                                  const NormOptions& options = {});

/// a *_sigma a* == a* *_sigma a within tol (l1).
bool is_normal(const AlgebraElement& a, const Cocycle& sigma, double tol = 1e-12);

/// Eigenvalues of regular_rep(sigma, a), sorted by (modulus, argument) descending.
std::vector<Complex> exact_spectrum(const Cocycle& sigma, const AlgebraElement& a);

/// Spectral report with r_sigma for finite groups; for infinite groups r_sigma is
/// the truncated norm of a when a is normal, otherwise absent.
SpectralReport spectral_report(const AlgebraElement& a, const Cocycle& sigma, int max_power, int radius,
                               const NormOptions& options = {});

struct FreenessCertificate {
  bool certified = false;
  int length = 0;
  std::size_t products_checked = 0;
  // Counterexample: two distinct generator sequences with equal product.
  std::vector<std::size_t> first_sequence;
  std::vector<std::size_t> second_sequence;
  std::optional<GroupElement> collision;

  Json to_json(const Group& g, const std::vector<GroupElement>& generators) const;
};

/// Checks that products of t f_i over distinct sequences of length 1..L are distinct.
FreenessCertificate certify_free_subsemigroup(const Group& g, const GroupElement& t, std::span<const GroupElement> f,
                                              int max_length, std::size_t cap = 2'000'000);

struct CriterionConfig {
  int max_power = 12;
  int radius = 6;
  int certify_length = 8;
  std::size_t samples = 3;
  std::uint64_t seed = 1;
  std::vector<AlgebraElement> elements;  // used instead of random samples when non-empty
  NormOptions norm;
};

struct CriterionSample {
  AlgebraElement element;
  std::vector<double> r2_sequence;
  double truncated_norm = 0.0;
  double haagerup = 0.0;
  double gap = 0.0;  // truncated_norm - r2 estimate
  // Gauge transport for sigma = d beta: untwisted data of T_beta^{-1}(a).
  std::optional<AlgebraElement> transported;
  std::vector<double> transported_r2_sequence;
  std::optional<double> transported_truncated_norm;
  std::optional<double> gauge_deviation;
};

struct CriterionReport {
  FreenessCertificate certificate;
  std::vector<GroupElement> generators;  // t f_i
  std::vector<CriterionSample> samples;
  bool gauge_transported = false;
  double max_gauge_deviation = 0.0;

  Json to_json(const Group& g) const;
};

/// Numeric evidence bundle for elements supported on tF in a free group.
CriterionReport criterion_report(const Cocycle& sigma, const GroupElement& t, std::span<const GroupElement> f,
                                 const CriterionConfig& config);

}  // namespace twistlab
