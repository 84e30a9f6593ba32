#include "twistlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "twistlab/error.hpp"

namespace twistlab {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::dimension_mismatch, "entry count does not match rows x cols");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::dimension_mismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != cols_) throw Error(ErrorCode::dimension_mismatch, "vector length");
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex acc{};
    const Complex* row = &data_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!square()) return false;
  const double bound = tol * std::max(max_abs(), 1e-300);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > bound) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorCode::dimension_mismatch, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorCode::dimension_mismatch, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex* orow = &out.data_[i * out.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a.data_[i * a.cols_ + k];
      if (aik == Complex{}) continue;
      const Complex* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

double l2_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  Complex acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::dimension_mismatch, "hermitian_eigen needs a square matrix");
  if (!m.is_hermitian(1e-10)) throw Error(ErrorCode::not_hermitian, "matrix is not Hermitian within 1e-10");

  const std::size_t n = m.rows();
  ComplexMatrix a = m + m.adjoint();
  a *= 0.5;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double threshold = 1e-13 * m.frobenius_norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const Complex phase = std::conj(apq / r);  // e^{-i arg a_pq}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Unitary acting on coordinates (p, q): diag(1, phase) times the real rotation.
        const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

namespace {

ComplexMatrix gram(const ComplexMatrix& m) {
  // The smaller of m*m and mm*; both share the nonzero spectrum.
  return m.rows() >= m.cols() ? m.adjoint() * m : m * m.adjoint();
}

}  // namespace

double operator_norm(const ComplexMatrix& m, const OperatorNormOptions& options) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.max_abs() == 0.0) return 0.0;
  const ComplexMatrix g = gram(m);
  const std::size_t n = g.rows();

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> v(n);
  for (auto& z : v) z = Complex(normal(rng), normal(rng));
  double nv = l2_norm(v);
  for (auto& z : v) z /= nv;

  double mu_prev = 0.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    std::vector<Complex> w = g.apply(v);
    const double mu = inner(v, w).real();
    const double change = mu > 0 ? std::abs(mu - mu_prev) / mu : 1.0;
    if (it > 0 && change < options.converged_threshold) return std::sqrt(std::max(mu, 0.0));
    if (it >= options.stall_window && change > options.stall_threshold) break;
    const double nw = l2_norm(w);
    if (nw == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    mu_prev = mu;
  }
  const auto eig = hermitian_eigen(g);
  return std::sqrt(std::max(eig.values.back(), 0.0));
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  const std::size_t k = std::min(r, c);
  if (k == 0) return {};
  ComplexMatrix dil(r + c, r + c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      dil(i, r + j) = m(i, j);
      dil(r + j, i) = std::conj(m(i, j));
    }
  const auto eig = hermitian_eigen(dil);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::max(eig.values[r + c - 1 - i], 0.0);
  return out;
}

std::size_t rank_eps(const ComplexMatrix& m, double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::invalid_argument, "rank_eps needs eps > 0");
  const auto sv = singular_values(m);
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > eps; }));
}

ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
  const ComplexMatrix g = m.adjoint() * m;
  const auto eig = hermitian_eigen(g);
  const double scale = std::max(1.0, eig.values.empty() ? 0.0 : eig.values.back());
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < eig.values.size(); ++j)
    if (eig.values[j] <= tol * scale) keep.push_back(j);
  ComplexMatrix out(m.cols(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < m.cols(); ++i) out(i, c) = eig.vectors(i, keep[c]);
  return out;
}

std::vector<Complex> general_eigenvalues(const ComplexMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::dimension_mismatch, "eigenvalues need a square matrix");
  const std::size_t n = m.rows();
  ComplexMatrix h = m;

  // Householder reduction to upper Hessenberg form.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<Complex> x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
    const double nx = l2_norm(x);
    if (nx == 0.0) continue;
    const Complex phase = std::abs(x[0]) > 0 ? x[0] / std::abs(x[0]) : Complex(1.0);
    x[0] += phase * nx;
    const double nv = l2_norm(x);
    for (auto& z : x) z /= nv;
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(x[i - k - 1]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * x[i - k - 1] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * x[j - k - 1];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * s * std::conj(x[j - k - 1]);
    }
  }

  std::vector<Complex> eig(n);
  const double eps = 1e-15;
  std::size_t hi = n;
  int iter = 0;
  while (hi > 0) {
    const std::size_t top = hi - 1;
    std::size_t l = top;
    while (l > 0 && std::abs(h(l, l - 1)) > eps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l)))) --l;
    if (l == top || iter > 500) {
      eig[top] = h(top, top);
      --hi;
      iter = 0;
      continue;
    }
    ++iter;
    // Wilkinson shift from the trailing 2x2 block.
    const Complex a = h(top - 1, top - 1), b = h(top - 1, top), c = h(top, top - 1), d = h(top, top);
    const Complex half_tr = 0.5 * (a + d);
    const Complex disc = std::sqrt(half_tr * half_tr - (a * d - b * c));
    Complex shift = std::abs(half_tr + disc - d) < std::abs(half_tr - disc - d) ? half_tr + disc : half_tr - disc;
    if (iter % 11 == 10) shift = d + std::abs(c);

    for (std::size_t k = l; k <= top; ++k) h(k, k) -= shift;
    std::vector<std::pair<Complex, Complex>> rot;
    for (std::size_t k = l; k < top; ++k) {
      const Complex x = h(k, k), y = h(k + 1, k);
      const double nrm = std::sqrt(std::norm(x) + std::norm(y));
      if (nrm == 0.0) {
        rot.emplace_back(1.0, 0.0);
        continue;
      }
      const Complex cs = x / nrm, sn = y / nrm;
      rot.emplace_back(cs, sn);
      for (std::size_t j = k; j <= top; ++j) {
        const Complex u = h(k, j), w = h(k + 1, j);
        h(k, j) = std::conj(cs) * u + std::conj(sn) * w;
        h(k + 1, j) = -sn * u + cs * w;
      }
    }
    for (std::size_t k = l; k < top; ++k) {
      const auto [cs, sn] = rot[k - l];
      const std::size_t last = std::min(k + 2, top);
      for (std::size_t i = l; i <= last; ++i) {
        const Complex u = h(i, k), w = h(i, k + 1);
        h(i, k) = u * cs + w * sn;
        h(i, k + 1) = -u * std::conj(sn) + w * std::conj(cs);
      }
    }
    for (std::size_t k = l; k <= top; ++k) h(k, k) += shift;
  }
  return eig;
}

}  // namespace twistlab
