#pragma once

// Dense Hermitian eigensolver for small matrices (fiber operators, nu <= 64).
//
// Householder reduction to Hermitian tridiagonal form, a diagonal phase
// similarity that makes the tridiagonal real symmetric, then implicitly
// shifted QL (tql2). Eigenvectors are accumulated only when requested.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pgraph {

using Complex = std::complex<double>;

class EigenError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class HermitianMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-14;

  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t order) : order_(order), data_(order * order) {}

  // Validates conj-symmetry entrywise and clears diagonal imaginary parts.
  static HermitianMatrix from_entries(std::size_t order, std::vector<Complex> entries) {
    if (order == 0) throw EigenError("matrix order must be positive");
    if (entries.size() != order * order)
      throw EigenError("expected " + std::to_string(order * order) + " entries, got " +
                       std::to_string(entries.size()));
    HermitianMatrix m;
    m.order_ = order;
    m.data_ = std::move(entries);
    m.validate();
    return m;
  }

  std::size_t order() const { return order_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * order_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }

  const std::vector<Complex>& entries() const { return data_; }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < order_; ++i) s += (*this)(i, i).real();
    return s;
  }

  // max |A - A^dagger| entrywise.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t j = 0; j < order_; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  void validate() {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw EigenError("matrix has non-finite entries");
    for (std::size_t i = 0; i < order_; ++i) {
      for (std::size_t j = i; j < order_; ++j) {
        const Complex a = (*this)(i, j), b = (*this)(j, i);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (std::abs(a - std::conj(b)) > kSymmetryTolerance * scale)
          throw EigenError("matrix is not Hermitian at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
      (*this)(i, i).imag(0.0);
    }
  }

 private:
  std::size_t order_ = 0;
  std::vector<Complex> data_;
};

struct EigenDecomposition {
  std::vector<double> values;                 // non-decreasing
  std::vector<std::vector<Complex>> vectors;  // vectors[j] pairs with values[j]; empty if not requested
};

namespace detail {

// Dense column-major-free helper: a small row-major complex matrix.
struct CMat {
  std::size_t n;
  std::vector<Complex> a;
  explicit CMat(std::size_t n_) : n(n_), a(n_ * n_) {}
  Complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Reduces A (Hermitian) to real symmetric tridiagonal (diag, sub) with
// A = Z T Z^H. Z is only formed when want_vectors is set.
inline void tridiagonalize(const HermitianMatrix& h, std::vector<double>& diag, std::vector<double>& sub,
                           CMat* z) {
  const std::size_t n = h.order();
  CMat a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // Use the lower triangle as the source of truth.
      a(i, j) = i >= j ? h(i, j) : std::conj(h(j, i));
    }
  if (z) {
    std::fill(z->a.begin(), z->a.end(), Complex{});
    for (std::size_t i = 0; i < n; ++i) (*z)(i, i) = 1.0;
  }

  std::vector<Complex> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    double tail2 = xnorm2 - std::norm(a(k + 1, k));
    if (tail2 == 0.0) continue;
    const double xnorm = std::sqrt(xnorm2);
    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;

    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv;

    // A <- P A P with P = I - 2 v v^H, P Hermitian and unitary.
    // Left: A <- A - 2 v (v^H A)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      p[j] = s;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= 2.0 * v[i] * p[j];
    // Right: A <- A - 2 (A v) v^H
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= 2.0 * p[i] * std::conj(v[j]);

    if (z) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex s{};
        for (std::size_t j = k + 1; j < n; ++j) s += (*z)(i, j) * v[j];
        p[i] = s;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) (*z)(i, j) -= 2.0 * p[i] * std::conj(v[j]);
    }
  }

  diag.assign(n, 0.0);
  sub.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();

  // Phase similarity D^H T D with real non-negative subdiagonal.
  Complex d_prev = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex e = a(i + 1, i);
    const double mag = std::abs(e);
    const Complex d_next = mag > 0.0 ? d_prev * (e / mag) : d_prev;
    sub[i] = mag;
    if (z)
      for (std::size_t r = 0; r < n; ++r) (*z)(r, i + 1) *= d_next;
    d_prev = d_next;
  }
}

// Implicit QL on a real symmetric tridiagonal matrix. On return diag holds
// eigenvalues (unsorted); columns of z are rotated accordingly.
inline void tql2(std::vector<double>& d, std::vector<double>& e, CMat* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  constexpr int kMaxSweeps = 64;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxSweeps) throw EigenError("QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (z) {
            for (std::size_t k = 0; k < n; ++k) {
              const Complex hz = (*z)(k, ii + 1);
              (*z)(k, ii + 1) = s * (*z)(k, ii) + c * hz;
              (*z)(k, ii) = c * (*z)(k, ii) - s * hz;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

inline EigenDecomposition solve(const HermitianMatrix& h, bool want_vectors) {
  const std::size_t n = h.order();
  if (n == 0) throw EigenError("empty matrix");
  for (const auto& z : h.entries())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw EigenError("matrix has non-finite entries");

  EigenDecomposition out;
  if (n == 1) {
    out.values = {h(0, 0).real()};
    if (want_vectors) out.vectors = {{Complex(1.0)}};
    return out;
  }

  std::vector<double> d, e;
  CMat z(want_vectors ? n : 0);
  tridiagonalize(h, d, e, want_vectors ? &z : nullptr);
  tql2(d, e, want_vectors ? &z : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  out.values.reserve(n);
  for (auto j : order) out.values.push_back(d[j]);
  if (want_vectors) {
    out.vectors.assign(n, std::vector<Complex>(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < n; ++r) out.vectors[j][r] = z(r, order[j]);
  }
  return out;
}

}  // namespace detail

inline std::vector<double> eigenvalues(const HermitianMatrix& h) { return detail::solve(h, false).values; }

inline EigenDecomposition eigenpairs(const HermitianMatrix& h) { return detail::solve(h, true); }

}  // namespace pgraph
