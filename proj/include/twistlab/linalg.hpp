#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace twistlab {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  /// Row-major nested initializer, mostly for tests.
  static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  std::vector<Complex> column(std::size_t j) const;
  std::vector<Complex> apply(std::span<const Complex> v) const;

  double max_abs() const;
  double frobenius_norm() const;
  /// max|A - A*| <= tol * max(max|A|, tiny).
  bool is_hermitian(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j belongs to values[j]
};

/// Cyclic complex Jacobi. Throws NotHermitian / DimensionMismatch.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

struct OperatorNormOptions {
  std::uint64_t seed = 0x5eed;
  std::size_t max_iterations = 2000;
  std::size_t stall_window = 50;
  double stall_threshold = 1e-9;
  double converged_threshold = 1e-14;
};

/// Largest singular value. Power iteration on m*m from a seeded start vector,
/// falling back to the Jacobi eigensolver when the iteration stalls.
double operator_norm(const ComplexMatrix& m, const OperatorNormOptions& options = {});

/// Singular values in descending order, via the Hermitian dilation [[0, m], [m*, 0]].
std::vector<double> singular_values(const ComplexMatrix& m);

/// Number of singular values strictly greater than eps.
std::size_t rank_eps(const ComplexMatrix& m, double eps);

/// Eigenvalues of a general square matrix (Hessenberg reduction and shifted
/// complex QR). Used only for non-normal inputs.
std::vector<Complex> general_eigenvalues(const ComplexMatrix& m);

/// Orthonormal basis (columns) of the null space of m, singular values <= tol * max(1, |m|).
ComplexMatrix null_space(const ComplexMatrix& m, double tol);

double l2_norm(std::span<const Complex> v);
Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // sum conj(u_i) v_i

}  // namespace twistlab
