#pragma once

#include <cstdint>
#include <random>

#include "cstar/algebra.hpp"

namespace cstar::detail {

/// Gram-Schmidt step: appends the normalized component of candidate that is
/// orthogonal to basis, unless it is smaller than rel_tol of the original.
bool try_extend(std::vector<CMat>& basis, CMat candidate, Field field,
                double rel_tol);

bool is_real_matrix(const CMat& m);

inline CVec gaussian_coords(std::mt19937_64& rng, Eigen::Index d, Field field) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec c(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = field == Field::Complex ? normal(rng) : 0.0;
    c(i) = Complex(re, im);
  }
  return c;
}

}  // namespace cstar::detail
