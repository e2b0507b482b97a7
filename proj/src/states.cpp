#include "cstar/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cstar/spectral.hpp"
#include "detail.hpp"

namespace cstar {

// Functional ---------------------------------------------------------------------

Functional::Functional(AlgebraPtr algebra, CVec values)
    : algebra_(std::move(algebra)), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(algebra_->dim())) {
    throw Error(ErrorCode::DimensionMismatch,
                "functional needs one value per basis element");
  }
}

Functional Functional::from_density(AlgebraPtr algebra, const CMat& density) {
  const std::size_t d = algebra->dim();
  CVec values(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    values(static_cast<Eigen::Index>(i)) = (density * algebra->basis(i)).trace();
  }
  return Functional(std::move(algebra), std::move(values));
}

Complex Functional::operator()(const CMat& a) const {
  return (algebra_->coords(a).array() * values_.array()).sum();
}

Functional Functional::plus(const Functional& other) const {
  if (!algebra_->same_as(*other.algebra_)) {
    throw Error(ErrorCode::AlgebraMismatch, "functionals live on different algebras");
  }
  return Functional(algebra_, values_ + other.values_);
}

CMat Functional::gram() const {
  const std::size_t d = algebra_->dim();
  const std::vector<CMat> basis = algebra_->basis_list();
  CMat m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const CMat ej_star = basis[j].adjoint();
    for (std::size_t i = 0; i < d; ++i) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          (*this)(CMat(ej_star * basis[i]));
    }
  }
  return m;
}

// Positivity ---------------------------------------------------------------------

PositivityReport is_positive_functional(const Functional& f, double tol) {
  PositivityReport report;
  const AlgebraPtr& alg = f.algebra();
  // On M_n with the matrix-unit basis the Gram matrix is I (x) F with
  // F(b, d) = f(E_bd), so the n x n block decides positivity.
  const bool full = alg->is_full();
  const Eigen::Index n = alg->ambient_dim();
  const CMat m = full ? CMat(f.values().reshaped<Eigen::RowMajor>(n, n)) : f.gram();
  if (m.size() == 0) {
    report.positive = true;
    return report;
  }
  const double scale = std::max(1.0, frob(m));
  const bool hermitian = frob(m - m.adjoint()) <= tol * scale;
  const HermEig eig = herm_eig(0.5 * (m + m.adjoint()), 1.0);
  report.min_gram_eigenvalue = eig.values(0);
  const double top = eig.values.cwiseAbs().maxCoeff();
  report.positive = hermitian && eig.values(0) >= -tol * std::max(1.0, top);
  if (!report.positive) {
    if (full) {
      // first row carries the eigenvector: f(w* w) = v^H F v
      CMat w = CMat::Zero(n, n);
      w.row(0) = eig.vectors.col(0).transpose();
      report.witness = w;
    } else {
      report.witness = alg->from_coords(eig.vectors.col(0));
    }
  }
  return report;
}

State::State(Functional f, double tol) : f_(std::move(f)) {
  if (!is_positive_functional(f_, tol).positive) {
    throw Error(ErrorCode::NotPositive, "a state must be a positive functional");
  }
  const auto& unit = f_.algebra()->identity();
  if (!unit) {
    throw Error(ErrorCode::NotUnital, "states are only supported on unital algebras");
  }
  const Complex at_unit = f_(*unit);
  norm_ = at_unit.real();
  if (std::abs(at_unit - 1.0) > tol) {
    throw Error(ErrorCode::NotNormalized,
                "state must satisfy f(1) = 1, got " + std::to_string(norm_));
  }
}

State vector_state(const AlgebraPtr& alg, const CVec& x) {
  if (x.size() != alg->ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector size does not match the algebra");
  }
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotUnitVector, "vector state needs ||x|| = 1");
  }
  const std::size_t d = alg->dim();
  CVec values(static_cast<Eigen::Index>(d));
  if (alg->is_full()) {
    const Eigen::Index n = alg->ambient_dim();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) values(i * n + j) = std::conj(x(i)) * x(j);
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      values(static_cast<Eigen::Index>(i)) = x.dot(alg->basis(i) * x);
    }
  }
  Functional f(alg, values);
  if (alg->identity() && !alg->contains_ambient_identity()) {
    const double mass = f(*alg->identity()).real();
    if (mass <= 1e-12) {
      throw Error(ErrorCode::NotUnitVector, "vector is orthogonal to the range of the unit");
    }
    f = f.scaled(1.0 / mass);
  }
  return State(std::move(f));
}

double functional_norm(const Functional& f) {
  if (!is_positive_functional(f).positive) {
    throw Error(ErrorCode::NotPositive, "functional is not positive");
  }
  const auto& unit = f.algebra()->identity();
  if (!unit) throw Error(ErrorCode::NotUnital, "norm formula needs a unital algebra");
  return f(*unit).real();
}

double sampled_functional_sup(const Functional& f, int samples, std::uint64_t seed) {
  const AlgebraPtr& alg = f.algebra();
  std::mt19937_64 rng(seed);
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    CMat a = alg->from_coords(
        detail::gaussian_coords(rng, static_cast<Eigen::Index>(alg->dim()), alg->field()));
    const double norm = op_norm(a);
    if (norm == 0.0) continue;
    a /= norm;
    sup = std::max(sup, std::abs(f(a)));
  }
  return sup;
}

double cauchy_schwarz_residual(const Functional& f, const CMat& a, const CMat& b) {
  if (!is_positive_functional(f).positive) {
    throw Error(ErrorCode::NotPositive, "Cauchy-Schwarz needs a positive functional");
  }
  const double faa = f(CMat(a.adjoint() * a)).real();
  const double fbb = f(CMat(b.adjoint() * b)).real();
  const Complex fba = f(CMat(b.adjoint() * a));
  return faa * fbb - std::norm(fba);
}

State norming_state(const Element& a) {
  if (!classify(a).positive) {
    throw Error(ErrorCode::NotPositive, "norming state needs a positive element");
  }
  const AlgebraPtr& alg = a.algebra();
  const CMat& m = a.matrix();
  if (op_norm(m) == 0.0) return trace_state(alg);
  CVec x = CVec::Zero(m.rows());
  if (is_diagonal(m)) {
    Eigen::Index top = 0;
    m.diagonal().real().maxCoeff(&top);
    x(top) = 1.0;
  } else {
    const HermEig eig = herm_eig(m);
    x = eig.vectors.col(eig.values.size() - 1);
  }
  return vector_state(alg, x);
}

State trace_state(const AlgebraPtr& alg) {
  const auto& unit = alg->identity();
  if (!unit) throw Error(ErrorCode::NotUnital, "trace state needs a unital algebra");
  const Complex tr = unit->trace();
  return State(Functional::from_density(alg, identity(alg->ambient_dim()) / tr));
}

}  // namespace cstar
