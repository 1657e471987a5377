#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pgraph/hermitian_eig.hpp"
#include "test_support.hpp"

using namespace pgraph;

namespace {

// Number of eigenvalues below x by Sylvester's law of inertia: the signs of
// the pivots of an LDL^H factorisation of H - x I.
int count_below(const HermitianMatrix& h, double x) {
  const std::size_t n = h.order();
  std::vector<Complex> a(h.entries());
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= x;
  int negative = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double piv = a[k * n + k].real();
    if (std::abs(piv) < 1e-300) piv = -1e-300;
    if (piv < 0) ++negative;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex m = a[i * n + k] / piv;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
    }
  }
  return negative;
}

std::vector<double> bisection_eigenvalues(const HermitianMatrix& h) {
  const std::size_t n = h.order();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(h(i, j));
    r = std::max(r, s);
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < n; ++j) {
    double lo = -r - 1.0, hi = r + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(h, mid) > static_cast<int>(j))
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

double residual(const HermitianMatrix& h, const std::vector<Complex>& x, double lambda) {
  const std::size_t n = h.order();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Complex y{};
    for (std::size_t j = 0; j < n; ++j) y += h(i, j) * x[j];
    s += std::norm(y - lambda * x[i]);
  }
  return std::sqrt(s);
}

}  // namespace

TEST(Eigenvalues, LineTwoFiberAtZero) {
  const double q = 0.5;
  auto h = HermitianMatrix::from_entries(2, {3 + q, -3, -3, 3 - q});
  auto ev = eigenvalues(h);
  EXPECT_NEAR(ev[0], 3 - std::sqrt(9.25), 1e-13);
  EXPECT_NEAR(ev[1], 3 + std::sqrt(9.25), 1e-13);
}

TEST(Eigenvalues, DiagonalIsSorted) {
  HermitianMatrix h(5);
  const double c[] = {3.0, -1.0, 7.5, 0.0, -1.0};
  for (std::size_t i = 0; i < 5; ++i) h(i, i) = c[i];
  EXPECT_EQ(eigenvalues(h), (std::vector<double>{-1.0, -1.0, 0.0, 3.0, 7.5}));
}

TEST(Eigenvalues, MatchesInertiaBisectionOracle) {
  for (int trial = 0; trial < 30; ++trial) {
    auto h = testing_support::random_hermitian(8, 2.0);
    auto ev = eigenvalues(h);
    auto oracle = bisection_eigenvalues(h);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(ev[j], oracle[j], 1e-8);
  }
}

TEST(Eigenvalues, ClosedFormTwoByTwo) {
  for (int trial = 0; trial < 50; ++trial) {
    auto h = testing_support::random_hermitian(2, 3.0);
    const double a = h(0, 0).real(), d = h(1, 1).real(), b = std::abs(h(0, 1));
    const double m = 0.5 * (a + d), r = std::hypot(0.5 * (a - d), b);
    auto ev = eigenvalues(h);
    EXPECT_NEAR(ev[0], m - r, 1e-13 * std::max(1.0, std::abs(m) + r));
    EXPECT_NEAR(ev[1], m + r, 1e-13 * std::max(1.0, std::abs(m) + r));
  }
}

TEST(Eigenvalues, TraceAndPermutationInvariance) {
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testing_support::uniform_int(1, 12));
    auto h = testing_support::random_hermitian(n);
    auto ev = eigenvalues(h);
    double sum = 0.0;
    for (double x : ev) sum += x;
    EXPECT_NEAR(sum, h.trace(), 1e-10 * std::max(1.0, h.frobenius_norm()));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), testing_support::rng());
    HermitianMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = h(perm[i], perm[j]);
    auto ev2 = eigenvalues(p);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(ev[j], ev2[j], 1e-10 * std::max(1.0, h.frobenius_norm()));
  }
}

TEST(Eigenvalues, Deterministic) {
  auto h = testing_support::random_hermitian(10);
  EXPECT_EQ(eigenvalues(h), eigenvalues(h));
}

TEST(Eigenpairs, ResidualAndOrthonormality) {
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testing_support::uniform_int(1, 16));
    auto h = testing_support::random_hermitian(n, 5.0);
    auto dec = eigenpairs(h);
    ASSERT_EQ(dec.vectors.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_LE(residual(h, dec.vectors[j], dec.values[j]), 1e-10 * h.frobenius_norm());
      for (std::size_t k = 0; k < n; ++k) {
        Complex ip{};
        for (std::size_t i = 0; i < n; ++i) ip += std::conj(dec.vectors[j][i]) * dec.vectors[k][i];
        EXPECT_NEAR(std::abs(ip - (j == k ? 1.0 : 0.0)), 0.0, 1e-10);
      }
    }
  }
}

TEST(Eigenpairs, SwapMatrix) {
  auto dec = eigenpairs(HermitianMatrix::from_entries(2, {0, 1, 1, 0}));
  EXPECT_NEAR(dec.values[0], -1.0, 1e-15);
  EXPECT_NEAR(dec.values[1], 1.0, 1e-15);
  EXPECT_NEAR(std::abs(dec.vectors[0][0] + dec.vectors[0][1]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(dec.vectors[1][0] - dec.vectors[1][1]), 0.0, 1e-14);
}

TEST(Eigenpairs, Identity) {
  HermitianMatrix h(4);
  for (std::size_t i = 0; i < 4; ++i) h(i, i) = 1.0;
  auto dec = eigenpairs(h);
  for (double x : dec.values) EXPECT_NEAR(x, 1.0, 1e-15);
}

TEST(Eigenpairs, DegenerateComplexMatrix) {
  // Repeated eigenvalues with a genuinely complex eigenbasis.
  HermitianMatrix h(3);
  h(0, 1) = Complex(0, 1);
  h(1, 0) = Complex(0, -1);
  h(2, 2) = 1.0;
  auto dec = eigenpairs(h);
  EXPECT_NEAR(dec.values[0], -1.0, 1e-14);
  EXPECT_NEAR(dec.values[1], 1.0, 1e-14);
  EXPECT_NEAR(dec.values[2], 1.0, 1e-14);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(residual(h, dec.vectors[j], dec.values[j]), 1e-13);
}

TEST(HermitianMatrixValidation, RejectsBadInput) {
  EXPECT_THROW(HermitianMatrix::from_entries(2, {1, 2, 3, 4}), EigenError);
  EXPECT_THROW(HermitianMatrix::from_entries(2, {1, Complex(0, 1), Complex(0, 1), 1}), EigenError);
  EXPECT_THROW(HermitianMatrix::from_entries(1, {std::nan("")}), EigenError);
  EXPECT_THROW(HermitianMatrix::from_entries(2, {1, 2, 3}), EigenError);
  HermitianMatrix h(2);
  h(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(eigenvalues(h), EigenError);
}

TEST(HermitianMatrixValidation, ClearsDiagonalImaginaryPart) {
  auto h = HermitianMatrix::from_entries(1, {Complex(2.0, 1e-20)});
  EXPECT_EQ(h(0, 0).imag(), 0.0);
}
