#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cstar/algebra.hpp"
#include "cstar/states.hpp"

namespace cstar {

/// A nonzero multiplicative functional, stored by its values on the
/// algebra's orthonormal basis.
struct Character {
  AlgebraPtr algebra;
  CVec values;

  Complex operator()(const CMat& a) const {
    return (algebra->coords(a).array() * values.array()).sum();
  }
  Complex operator()(const Element& a) const { return (*this)(a.matrix()); }
  /// Largest |chi(e_i e_j) - chi(e_i) chi(e_j)| over basis pairs.
  double multiplicativity_defect() const;
};

struct GelfandSpectrumData {
  AlgebraPtr algebra;
  std::vector<Character> characters;
};

/// All characters of an abelian algebra. Throws NonAbelian.
GelfandSpectrumData characters(const AlgebraPtr& alg, std::uint64_t seed = 0);

/// (chi_1(a), ..., chi_k(a)) in the order of spec.characters.
CVec gelfand_transform(const Element& a, const GelfandSpectrumData& spec);

struct IsometrySample {
  double transform_sup = 0.0;  // sup |a^|
  double spectral_radius = 0.0;
  double norm = 0.0;
  double radius_residual = 0.0;  // sup|a^| - r(a)
  double norm_residual = 0.0;    // sup|a^| - ||a||
};

struct IsometryReport {
  std::vector<IsometrySample> samples;
  double max_radius_residual = 0.0;  // max |sup|a^| - r(a)|
  double max_norm_residual = 0.0;    // max |sup|a^| - ||a|||
  bool star_closed = false;
  std::size_t character_count = 0;
  /// Orthonormal basis (as matrices) of the kernel of the transform; a
  /// nonzero kernel means the algebra is not semisimple.
  std::vector<CMat> transform_kernel;
};

IsometryReport gelfand_isometry_report(const AlgebraPtr& alg, int samples,
                                       std::uint64_t seed);

/// {a : chi(a) = 0}, a codimension-one two-sided ideal.
SubspaceBasis char_kernel(const Character& chi);

struct CharacterVerdict {};

struct GkzWitness {
  Element witness;
  double smallest_singular_value = 0.0;
  Complex functional_value;
  int attempts_used = 0;
};

using GkzResult = std::variant<CharacterVerdict, GkzWitness>;

/// Either certifies phi as a character, or returns an invertible element
/// of ker(phi). Throws WitnessNotFound after the attempt budget.
GkzResult gkz_witness(const Functional& phi, std::uint64_t seed, int attempts = 200);

// Cyclic group algebra ---------------------------------------------------------

/// N x N matrix with entries C(i, j) = c[(i - j) mod N].
CMat circulant(const CVec& c);

/// Circulant matrices of size N, spanned by the powers of the cyclic shift.
AlgebraPtr cyclic_group_algebra(Eigen::Index N);

/// Cyclic convolution (x * y)_n = sum_m x_m y_(n-m mod N).
CVec conv(const CVec& x, const CVec& y);

}  // namespace cstar
