#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cstar/algebra.hpp"

namespace cstar {

enum class FieldMode { Real, Complex };

struct SpectrumReport {
  std::vector<Complex> points;  // deduplicated
  double radius = 0.0;          // max |point|, 0 for an empty real spectrum
  FieldMode mode = FieldMode::Complex;
};

/// Eigenvalues closer than this are reported as one spectral point.
double clustering_radius(double spectral_radius);

std::vector<Complex> dedupe(const std::vector<Complex>& values, double radius);

/// Symmetric Hausdorff distance between two finite point sets. An empty set
/// is treated as {0}.
double hausdorff_distance(const std::vector<Complex>& a,
                          const std::vector<Complex>& b);

/// The element itself if its algebra is unital, otherwise its image (a, 0)
/// in the unitization. Every operation below that needs a unit goes
/// through this.
Element unital_lift(const Element& a);

/// Inverse inside the element's (unital) algebra, whose unit may differ
/// from I_n. Throws Singular.
Element algebra_inverse(const Element& a);

/// Spectrum relative to the element's algebra. When the unit is I_n this
/// is the ambient eigenvalue set; for a corner algebra with unit e it is
/// the spectrum of the compression to range(e).
SpectrumReport spectrum(const Element& a, FieldMode mode = FieldMode::Complex);

Element resolvent(const Element& a, Complex z);

struct RadiusTrace {
  std::vector<std::pair<long, double>> terms;  // (n, ||a^n||^(1/n))
  double estimate = 0.0;      // infimum over the terms
  double eigen_radius = 0.0;  // max |eigenvalue|
  double gap = 0.0;           // |estimate - eigen_radius|
};

/// ||m^n||^(1/n) by binary powering with log-scaled normalization, so no
/// intermediate power overflows.
double power_norm_root(const CMat& m, long n);

/// Terms at n = 1, 2, 4, ... <= n_max, plus n_max itself when it is not a
/// power of two.
RadiusTrace spectral_radius_limit(const Element& a, long n_max);

/// (1 - a)^-1 as a geometric series; throws NotContractive if ||a|| >= 1.
Element neumann_inverse(const Element& a, double tol = 1e-12);

/// Scaling and squaring: scale so the Frobenius norm is <= 0.5, sum 20
/// Taylor terms, square back.
Element exp_element(const Element& a);

/// coeffs are in ascending order: c0 + c1 x + c2 x^2 + ...
Element poly_apply(const Element& a, const std::vector<Complex>& coeffs);

struct Classification {
  bool hermitian = false;
  bool unitary = false;
  bool normal = false;
  bool positive = false;
};

Classification classify(const Element& a, double tol = kDefaultTol);

Element sqrt_positive(const Element& a);

/// f(a) = U f(Lambda) U* for normal a. Throws NotNormal.
Element func_calc(const Element& a, const std::function<Complex(Complex)>& f);

struct CommutatorReport {
  Complex trace_value;
  double scalar_residual = 0.0;
  Complex lambda_candidate;
  bool scalar = false;  // ab - ba is a multiple of the unit
};

CommutatorReport commutator_scalar_test(const Element& a, const Element& b,
                                        double tol = kDefaultTol);

/// Hausdorff distance between the nonzero parts of sigma(ab) and sigma(ba).
double spec_symmetry_check(const Element& a, const Element& b);

}  // namespace cstar
