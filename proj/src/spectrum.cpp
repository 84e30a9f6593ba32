#include <algorithm>
#include <cmath>

#include "twistlab/error.hpp"
#include "twistlab/norms.hpp"

namespace twistlab {

namespace {

// Generic weight for H1 + c H2; any value avoiding accidental coincidences works.
constexpr double kMix = 0.5772156649015329;
constexpr double kClusterGap = 1e-8;

ComplexMatrix compress(const ComplexMatrix& v, std::size_t lo, std::size_t hi, const ComplexMatrix& m) {
  ComplexMatrix basis(v.rows(), hi - lo);
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = lo; j < hi; ++j) basis(i, j - lo) = v(i, j);
  return basis.adjoint() * m * basis;
}

std::vector<Complex> normal_spectrum(const ComplexMatrix& m) {
  const ComplexMatrix mh = m.adjoint();
  ComplexMatrix h1 = m + mh;
  h1 *= 0.5;
  ComplexMatrix h2 = m - mh;
  h2 *= Complex(0.0, -0.5);
  ComplexMatrix mix = h1 + Complex(kMix) * h2;
  // Symmetrize away rounding so the Jacobi solver accepts it.
  mix = 0.5 * (mix + mix.adjoint());
  const HermitianEigen eig = hermitian_eigen(mix);
  const double scale = std::max(1.0, std::abs(eig.values.empty() ? 0.0 : eig.values.back()));
  std::vector<Complex> out;
  std::size_t lo = 0;
  const std::size_t n = eig.values.size();
  while (lo < n) {
    std::size_t hi = lo + 1;
    while (hi < n && eig.values[hi] - eig.values[hi - 1] <= kClusterGap * scale) ++hi;
    const ComplexMatrix block = compress(eig.vectors, lo, hi, m);
    if (hi - lo == 1) {
      out.push_back(block(0, 0));
    } else {
      // Eigenvalues sharing a mixed value: resolve them on the cluster subspace.
      for (const auto& z : general_eigenvalues(block)) out.push_back(z);
    }
    lo = hi;
  }
  return out;
}

}  // namespace

bool is_normal(const AlgebraElement& a, const Cocycle& sigma, double tol) {
  const AlgebraElement s = involute(a, sigma);
  const double scale = std::max(1.0, l1_norm(a) * l1_norm(a));
  return l1_distance(convolve(a, s, sigma), convolve(s, a, sigma)) <= tol * scale;
}

std::vector<Complex> exact_spectrum(const Cocycle& sigma, const AlgebraElement& a) {
  if (!a.group().is_finite()) throw Error(ErrorCode::not_finite, "exact_spectrum needs a finite group");
  const ComplexMatrix m = regular_rep(sigma, a);
  std::vector<Complex> values = is_normal(a, sigma) ? normal_spectrum(m) : general_eigenvalues(m);
  std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (std::abs(ax - ay) > 1e-12 * std::max(1.0, ax)) return ax > ay;
    return std::arg(x) > std::arg(y);
  });
  return values;
}

}  // namespace twistlab
