#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cstar/algebra.hpp"

namespace cstar {

/// A linear functional, stored by its values on the algebra's orthonormal
/// basis: f(a) = sum_i coords(a)_i * values_i.
class Functional {
 public:
  Functional(AlgebraPtr algebra, CVec values);

  /// f(a) = trace(density * a), restricted to the algebra.
  static Functional from_density(AlgebraPtr algebra, const CMat& density);

  const AlgebraPtr& algebra() const { return algebra_; }
  const CVec& values() const { return values_; }

  Complex operator()(const CMat& a) const;
  Complex operator()(const Element& a) const { return (*this)(a.matrix()); }

  Functional scaled(Complex s) const { return Functional(algebra_, s * values_); }
  Functional plus(const Functional& other) const;

  /// Hermitian matrix M with M(j, i) = f(e_j* e_i), so that
  /// f(b* a) = coords(b)^H M coords(a).
  CMat gram() const;

 private:
  AlgebraPtr algebra_;
  CVec values_;
};

/// A positive functional of norm one. Construction checks both.
class State {
 public:
  /// Throws NotPositive or NotNormalized.
  explicit State(Functional f, double tol = 1e-9);

  const Functional& functional() const { return f_; }
  const AlgebraPtr& algebra() const { return f_.algebra(); }
  double norm() const { return norm_; }
  Complex operator()(const CMat& a) const { return f_(a); }
  Complex operator()(const Element& a) const { return f_(a); }

 private:
  Functional f_;
  double norm_ = 1.0;
};

struct PositivityReport {
  bool positive = false;
  double min_gram_eigenvalue = 0.0;
  /// For a non-positive functional: an element a with f(a* a) < 0.
  std::optional<CMat> witness;
};

PositivityReport is_positive_functional(const Functional& f, double tol = 1e-9);

/// f(a) = x* a x. The vector must have unit length; if the algebra's unit is
/// not I_n the functional is renormalized by f(1). Throws NotUnitVector.
State vector_state(const AlgebraPtr& alg, const CVec& x);

/// ||f|| = f(1) for a positive functional on a unital algebra.
/// Throws NotPositive, NotUnital.
double functional_norm(const Functional& f);

/// max |f(a)| over seeded random elements rescaled to ||a|| = 1.
double sampled_functional_sup(const Functional& f, int samples, std::uint64_t seed);

/// f(a* a) f(b* b) - |f(b* a)|^2, non-negative for positive f.
double cauchy_schwarz_residual(const Functional& f, const CMat& a, const CMat& b);

/// Vector state at a top eigenvector of a positive element; f(a) = ||a||.
State norming_state(const Element& a);

/// Normalized trace f(a) = trace(a) / trace(1).
State trace_state(const AlgebraPtr& alg);

/// A representation of an algebra: one matrix per basis element, extended
/// linearly.
struct Representation {
  AlgebraPtr algebra;
  std::vector<CMat> basis_images;
  Eigen::Index dim = 0;

  CMat operator()(const CMat& a) const;
  CMat operator()(const Element& a) const { return (*this)(a.matrix()); }
};

struct GnsRepresentation {
  Representation rep;
  Eigen::Index hilbert_dim = 0;
  /// k x d matrix sending algebra coordinates to H_f coordinates.
  CMat coset_map;
  std::optional<State> state;
  /// Coordinates of [1] when the algebra is unital.
  std::optional<CVec> cyclic_vector;

  CVec vector_of(const CMat& a) const;
};

/// GNS construction for a positive functional. Gram eigenvalues below
/// 1e-10 of the largest are treated as the null space N_f.
GnsRepresentation gns(const Functional& f);
GnsRepresentation gns(const State& f);

/// Block-diagonal sum. Throws AlgebraMismatch.
Representation direct_sum_reps(const std::vector<Representation>& reps);

struct UniversalReport {
  Representation representation;
  std::size_t state_count = 0;
  double max_isometry_residual = 0.0;  // max | ||pi(a)|| - ||a|| |
};

/// Direct sum of GNS representations over the trace state, extra_states,
/// and (optionally) norming states of (a a*)^2 for each basis element a.
UniversalReport universal_rep(const AlgebraPtr& alg,
                              const std::vector<State>& extra_states,
                              std::uint64_t seed, bool include_norming = true,
                              int samples = 100);

}  // namespace cstar
