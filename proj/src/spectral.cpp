#include "cstar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {

namespace {

// Unit of the element's algebra, as an ambient matrix.
CMat unit_of(const Element& a) { return *a.algebra()->identity(); }

CMat complement_of_unit(const Element& a) {
  const Eigen::Index n = a.matrix().rows();
  return identity(n) - unit_of(a);
}

// Orthonormal basis of range(e) for an idempotent e.
CMat unit_range(const CMat& e) {
  const HermEig eig = herm_eig(e * e.adjoint());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 0.5) keep.push_back(k);
  }
  CMat q(e.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    q.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(keep[k]);
  }
  return q;
}

std::vector<Complex> algebra_eigenvalues(const Element& lifted) {
  if (lifted.algebra()->contains_ambient_identity()) {
    return eig_general(lifted.matrix());
  }
  const CMat q = unit_range(unit_of(lifted));
  if (q.cols() == 0) return {};
  return eig_general(q.adjoint() * lifted.matrix() * q);
}

double max_modulus(const std::vector<Complex>& values) {
  double r = 0.0;
  for (const Complex& v : values) r = std::max(r, std::abs(v));
  return r;
}

CMat diag_apply(const CMat& m, const std::function<Complex(Complex)>& f) {
  CMat out = CMat::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) = f(m(i, i));
  return out;
}

}  // namespace

double clustering_radius(double spectral_radius) {
  return 1e-7 * (1.0 + spectral_radius);
}

std::vector<Complex> dedupe(const std::vector<Complex>& values, double radius) {
  std::vector<Complex> out;
  for (const Complex& v : values) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Complex& p) {
      return std::abs(p - v) <= radius;
    });
    if (!seen) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

double hausdorff_distance(const std::vector<Complex>& a,
                          const std::vector<Complex>& b) {
  const std::vector<Complex> zero{Complex(0.0)};
  const auto& x = a.empty() ? zero : a;
  const auto& y = b.empty() ? zero : b;
  auto directed = [](const std::vector<Complex>& from,
                     const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

Element unital_lift(const Element& a) {
  if (a.algebra()->unital()) return a;
  const Unitization u = unitize(a.algebra());
  return Element::projected(u.algebra, u.embed(a.matrix()));
}

Element algebra_inverse(const Element& a) {
  const Element l = unital_lift(a);
  const CMat comp = complement_of_unit(l);
  // x + (I - e) is invertible in M_n iff x is invertible in e M_n e, and
  // then its inverse is x^-1 + (I - e).
  const CMat inv = invert(l.matrix() + comp) - comp;
  return Element::projected(l.algebra(), inv);
}

SpectrumReport spectrum(const Element& a, FieldMode mode) {
  const Element l = unital_lift(a);
  const std::vector<Complex> eig = algebra_eigenvalues(l);
  const double cluster = clustering_radius(max_modulus(eig));
  SpectrumReport report;
  report.mode = mode;
  if (mode == FieldMode::Complex) {
    report.points = dedupe(eig, cluster);
  } else {
    std::vector<Complex> real;
    for (const Complex& v : eig) {
      if (std::abs(v.imag()) <= cluster) real.emplace_back(v.real(), 0.0);
    }
    report.points = dedupe(real, cluster);
  }
  report.radius = max_modulus(report.points);
  return report;
}

Element resolvent(const Element& a, Complex z) {
  const Element l = unital_lift(a);
  const SpectrumReport s = spectrum(l);
  const double cluster = clustering_radius(s.radius);
  for (const Complex& p : s.points) {
    if (std::abs(p - z) <= cluster) {
      throw Error(ErrorCode::SingularResolvent,
                  "z lies in the spectrum (within the clustering radius)");
    }
  }
  const CMat shifted = l.matrix() - z * unit_of(l);
  return algebra_inverse(Element::projected(l.algebra(), shifted));
}

double power_norm_root(const CMat& m, long n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "power must be >= 1");
  if (!m.allFinite()) throw Error(ErrorCode::Overflow, "non-finite input");
  const double base_norm = op_norm(m);
  if (base_norm == 0.0) return 0.0;
  CMat base = m / base_norm;
  double log_base = std::log(base_norm);
  CMat acc = identity(m.rows());
  double log_acc = 0.0;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) {
      acc = acc * base;
      const double s = op_norm(acc);
      if (s == 0.0) return 0.0;
      acc /= s;
      log_acc += log_base + std::log(s);
    }
    if (e > 1) {
      base = base * base;
      const double s = op_norm(base);
      if (s == 0.0) {
        // Some higher power vanishes; the remaining bits make a^n zero.
        if ((e >> 1) > 0) return 0.0;
      }
      base /= s;
      log_base = 2.0 * log_base + std::log(s);
    }
  }
  const double out = std::exp(log_acc / static_cast<double>(n));
  if (!std::isfinite(out)) throw Error(ErrorCode::Overflow, "estimate is not finite");
  return out;
}

RadiusTrace spectral_radius_limit(const Element& a, long n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  const CMat& m = a.matrix();
  if (!m.allFinite()) throw Error(ErrorCode::Overflow, "non-finite input");
  RadiusTrace trace;

  double norm = op_norm(m);
  trace.terms.emplace_back(1, norm);
  CMat q = norm > 0.0 ? CMat(m / norm) : m;
  double log_norm = norm > 0.0 ? std::log(norm) : -std::numeric_limits<double>::infinity();
  long n = 1;
  while (2 * n <= n_max) {
    n *= 2;
    if (norm == 0.0) {
      trace.terms.emplace_back(n, 0.0);
      continue;
    }
    q = q * q;
    const double s = op_norm(q);
    if (s == 0.0) {
      norm = 0.0;
      trace.terms.emplace_back(n, 0.0);
      continue;
    }
    q /= s;
    log_norm = 2.0 * log_norm + std::log(s);
    const double term = std::exp(log_norm / static_cast<double>(n));
    if (!std::isfinite(term)) throw Error(ErrorCode::Overflow, "power norm is not finite");
    trace.terms.emplace_back(n, term);
  }
  if (n != n_max) trace.terms.emplace_back(n_max, power_norm_root(m, n_max));

  trace.estimate = trace.terms.front().second;
  for (const auto& [k, v] : trace.terms) trace.estimate = std::min(trace.estimate, v);
  trace.eigen_radius = spectrum(a).radius;
  trace.gap = std::abs(trace.estimate - trace.eigen_radius);
  return trace;
}

Element neumann_inverse(const Element& a, double tol) {
  const Element l = unital_lift(a);
  const CMat& m = l.matrix();
  const double norm = op_norm(m);
  if (norm >= 1.0) {
    throw Error(ErrorCode::NotContractive,
                "Neumann series needs ||a|| < 1, got " + std::to_string(norm));
  }
  const CMat unit = unit_of(l);
  CMat sum = unit;
  CMat term = unit;
  const double stop = tol * (1.0 - norm);
  for (int k = 0; k < 1000000; ++k) {
    term = term * m;
    sum += term;
    if (frob(term) <= stop) break;
  }
  return Element::projected(l.algebra(), sum);
}

Element exp_element(const Element& a) {
  const Element l = unital_lift(a);
  const CMat& m = l.matrix();
  const Eigen::Index n = m.rows();
  if (is_diagonal(m)) {
    CMat out = diag_apply(m, [](Complex z) { return std::exp(z); });
    return Element::projected(l.algebra(), out - complement_of_unit(l));
  }
  const double norm = frob(m);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMat x = m / std::ldexp(1.0, squarings);
  constexpr int kTerms = 20;
  const CMat eye = identity(n);
  CMat e = eye;
  for (int k = kTerms; k >= 1; --k) e = eye + (x * e) / static_cast<double>(k);
  for (int s = 0; s < squarings; ++s) e = e * e;
  // Ambient exp(a) = exp_A(a) + (I - e) for a = e a e.
  return Element::projected(l.algebra(), e - complement_of_unit(l));
}

Element poly_apply(const Element& a, const std::vector<Complex>& coeffs) {
  const Element l = unital_lift(a);
  const CMat unit = unit_of(l);
  if (coeffs.empty()) return Element::projected(l.algebra(), CMat::Zero(unit.rows(), unit.cols()));
  CMat r = coeffs.back() * unit;
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
    r = r * l.matrix() + (*it) * unit;
  }
  return Element::projected(l.algebra(), r);
}

Classification classify(const Element& a, double tol) {
  const CMat& m = a.matrix();
  const double scale = std::max(1.0, frob(m));
  Classification c;
  const auto& unit = a.algebra()->identity();
  if (is_diagonal(m)) {
    const auto d = m.diagonal();
    c.hermitian = d.imag().cwiseAbs().maxCoeff() <= tol * scale;
    c.normal = true;
    c.positive = c.hermitian && d.real().minCoeff() >= -tol * scale;
    if (unit) c.unitary = frob(CMat(m * m.adjoint()) - *unit) <= tol * std::max(1.0, frob(*unit));
    return c;
  }
  const CMat mstar = m.adjoint();
  c.hermitian = frob(m - mstar) <= tol * scale;
  const CMat mm = m * mstar;
  const CMat mm2 = mstar * m;
  c.normal = frob(mm - mm2) <= tol * scale * scale;
  if (unit) {
    const double us = std::max(1.0, frob(*unit));
    c.unitary = frob(mm - *unit) <= tol * us && frob(mm2 - *unit) <= tol * us;
  }
  if (c.hermitian) {
    c.positive = herm_eig(m, tol).values.minCoeff() >= -tol * scale;
  }
  return c;
}

Element sqrt_positive(const Element& a) {
  if (!classify(a).positive) {
    throw Error(ErrorCode::NotPositive, "square root needs a positive element");
  }
  const CMat& m = a.matrix();
  if (is_diagonal(m)) {
    return Element::projected(a.algebra(), diag_apply(m, [](Complex z) {
                                return Complex(std::sqrt(std::max(z.real(), 0.0)));
                              }));
  }
  const HermEig eig = herm_eig(m);
  RVec root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const CMat out = eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return Element::projected(a.algebra(), out);
}

Element func_calc(const Element& a, const std::function<Complex(Complex)>& f) {
  if (!classify(a).normal) throw Error(ErrorCode::NotNormal, "func_calc needs a normal element");
  const Element l = unital_lift(a);
  const CMat& m = l.matrix();
  const Complex f0 = f(Complex(0.0));
  if (is_diagonal(m)) {
    return Element::projected(l.algebra(), diag_apply(m, f) - f0 * complement_of_unit(l));
  }
  // Hermitian and skew parts of a normal matrix commute; a generic real
  // combination of them has the joint eigenvectors as its eigenvectors.
  constexpr double kMix = 0.6180339887498949;
  const CMat re = 0.5 * (m + m.adjoint());
  const CMat im = Complex(0.0, -0.5) * (m - m.adjoint());
  const HermEig eig = herm_eig(re + kMix * im);
  const Eigen::Index n = m.rows();
  CVec fl(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVec v = eig.vectors.col(k);
    fl(k) = f(v.dot(m * v));
  }
  const CMat out = eig.vectors * fl.asDiagonal() * eig.vectors.adjoint();
  return Element::projected(l.algebra(), out - f0 * complement_of_unit(l));
}

CommutatorReport commutator_scalar_test(const Element& a, const Element& b,
                                        double tol) {
  CMat x = a.matrix();
  CMat y = b.matrix();
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "elements live in different M_n");
  }
  CMat unit;
  if (a.algebra()->unital()) {
    unit = unit_of(a);
  } else {
    const Eigen::Index n = x.rows();
    x.conservativeResize(n + 1, n + 1);
    y.conservativeResize(n + 1, n + 1);
    x.row(n).setZero();
    x.col(n).setZero();
    y.row(n).setZero();
    y.col(n).setZero();
    unit = identity(n + 1);
  }
  const CMat c = x * y - y * x;
  CommutatorReport r;
  r.trace_value = c.trace();
  r.lambda_candidate = r.trace_value / unit.trace();
  r.scalar_residual = op_norm(c - r.lambda_candidate * unit);
  r.scalar = r.scalar_residual <= tol * std::max(1.0, op_norm(x) * op_norm(y));
  return r;
}

double spec_symmetry_check(const Element& a, const Element& b) {
  const CMat& x = a.matrix();
  const CMat& y = b.matrix();
  const std::vector<Complex> ab = eig_general(x * y);
  const std::vector<Complex> ba = eig_general(y * x);
  const double r = std::max(max_modulus(ab), max_modulus(ba));
  const double cut = clustering_radius(r);
  auto nonzero = [&](const std::vector<Complex>& v) {
    std::vector<Complex> out;
    for (const Complex& z : v) {
      if (std::abs(z) > cut) out.push_back(z);
    }
    return out;
  };
  return hausdorff_distance(nonzero(ab), nonzero(ba));
}

}  // namespace cstar
