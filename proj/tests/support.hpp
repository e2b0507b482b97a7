#pragma once

// Seeded generators and independent reference computations shared by the
// test binaries. The oracles lean on Eigen's own solvers so they never go
// through the code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cstar/linalg.hpp"

namespace testing_support {

using cstar::CMat;
using cstar::Complex;
using cstar::CVec;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  Complex cnormal() { return {normal(), normal()}; }

  CMat matrix(Eigen::Index n) { return matrix(n, n); }
  CMat matrix(Eigen::Index r, Eigen::Index c) {
    CMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cnormal();
    return m;
  }
  CVec vector(Eigen::Index n) { return matrix(n, 1).col(0); }
  CVec unit_vector(Eigen::Index n) {
    CVec v = vector(n);
    return v / v.norm();
  }
  CMat hermitian(Eigen::Index n) {
    CMat m = matrix(n);
    return (m + m.adjoint()) / 2.0;
  }
  CMat psd(Eigen::Index n) {
    CMat m = matrix(n);
    return m.adjoint() * m;
  }
  CMat unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMat> qr(matrix(n));
    return qr.householderQ() * CMat::Identity(n, n);
  }
  // U diag(z) U* with random complex z.
  CMat normal_matrix(Eigen::Index n) {
    const CMat u = unitary(n);
    CVec z = vector(n);
    return u * z.asDiagonal() * u.adjoint();
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

// --- oracles ---------------------------------------------------------------

inline double svd_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

inline std::vector<Complex> eigen_eigenvalues(const CMat& m) {
  Eigen::ComplexEigenSolver<CMat> es(m, false);
  const CVec v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double eigen_radius(const CMat& m) {
  double r = 0.0;
  for (const Complex& z : eigen_eigenvalues(m)) r = std::max(r, std::abs(z));
  return r;
}

// Plain truncated power series; fine for moderate norms.
inline CMat series_exp(const CMat& a, int terms = 60) {
  CMat sum = CMat::Identity(a.rows(), a.cols());
  CMat term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

inline CVec dft(const CVec& c) {
  const auto n = c.size();
  CVec out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * k) / n;
      s += c(j) * std::polar(1.0, angle);
    }
    out(k) = s;
  }
  return out;
}

// Greedy matching distance between two multisets of equal size.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const Complex& z : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](Complex x, Complex y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    worst = std::max(worst, std::abs(*best - z));
    b.erase(best);
  }
  return worst;
}

// Every point of a within tol of some point of b and vice versa.
inline double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto one_way = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double worst = 0.0;
    for (const Complex& z : x) {
      double best = INFINITY;
      for (const Complex& w : y) best = std::min(best, std::abs(z - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

inline CMat mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  CMat m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex& z : row) m(i, j++) = z;
    ++i;
  }
  return m;
}

inline CMat unit_matrix(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMat m = CMat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing_support
