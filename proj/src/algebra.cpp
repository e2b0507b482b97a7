#include "cstar/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail.hpp"

namespace cstar {

namespace detail {

bool try_extend(std::vector<CMat>& basis, CMat candidate, Field field,
                double rel_tol) {
  const double original = frob(candidate);
  if (original == 0.0) return false;
  // Two Gram-Schmidt passes keep the basis orthonormal to working
  // precision even when the candidate is nearly dependent.
  for (int pass = 0; pass < 2; ++pass) {
    for (const CMat& b : basis) {
      Complex c = trace_pairing(candidate, b);
      if (field == Field::Real) c = c.real();
      candidate -= c * b;
    }
  }
  const double remaining = frob(candidate);
  if (remaining <= rel_tol * original) return false;
  basis.push_back(candidate / remaining);
  return true;
}

bool is_real_matrix(const CMat& m) {
  return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace detail

using detail::try_extend;

namespace {

constexpr double kMembershipTol = 1e-9;

std::optional<CMat> solve_identity(Eigen::Index n,
                                   const std::vector<CMat>& basis) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  if (d == 0) return std::nullopt;
  const CMat eye = identity(n);
  CMat probe = CMat::Zero(n, n);
  for (const CMat& b : basis) probe += trace_pairing(eye, b) * b;
  if (frob(probe - eye) <= kMembershipTol * std::sqrt(static_cast<double>(n))) {
    return eye;
  }

  // Solve sum_i x_i e_i e_j = e_j and sum_i x_i e_j e_i = e_j in least
  // squares; a unit exists iff the residual vanishes.
  const Eigen::Index block = n * n;
  CMat system(2 * d * block, d);
  CVec rhs(2 * d * block);
  for (Eigen::Index j = 0; j < d; ++j) {
    const CMat& ej = basis[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < d; ++i) {
      const CMat& ei = basis[static_cast<std::size_t>(i)];
      const CMat left = ei * ej;
      const CMat right = ej * ei;
      system.block(2 * j * block, i, block, 1) =
          Eigen::Map<const CVec>(left.data(), block);
      system.block((2 * j + 1) * block, i, block, 1) =
          Eigen::Map<const CVec>(right.data(), block);
    }
    rhs.segment(2 * j * block, block) = Eigen::Map<const CVec>(ej.data(), block);
    rhs.segment((2 * j + 1) * block, block) =
        Eigen::Map<const CVec>(ej.data(), block);
  }
  const CVec x = system.completeOrthogonalDecomposition().solve(rhs);
  if ((system * x - rhs).norm() > 1e-8 * std::sqrt(static_cast<double>(2 * d))) {
    return std::nullopt;
  }
  CMat e = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i < d; ++i) e += x(i) * basis[static_cast<std::size_t>(i)];
  return e;
}

}  // namespace

// Algebra ---------------------------------------------------------------------

AlgebraPtr Algebra::full(Eigen::Index n, Field field) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "M_n needs n >= 1");
  auto alg = std::shared_ptr<Algebra>(new Algebra());
  alg->n_ = n;
  alg->full_ = true;
  alg->field_ = field;
  alg->star_closed_ = true;
  alg->abelian_ = (n == 1);
  alg->identity_ = cstar::identity(n);
  return alg;
}

AlgebraPtr Algebra::from_orthonormal_basis(Eigen::Index n,
                                           std::vector<CMat> basis,
                                           Field field, bool star_closed) {
  for (const CMat& b : basis) {
    if (b.rows() != n || b.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "basis element has wrong size");
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = trace_pairing(basis[i], basis[j]);
      const Complex want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8) {
        throw Error(ErrorCode::InvalidArgument, "basis is not orthonormal");
      }
    }
  }
  if (basis.size() == static_cast<std::size_t>(n * n)) {
    return full(n, field);
  }
  auto alg = std::shared_ptr<Algebra>(new Algebra());
  alg->n_ = n;
  alg->field_ = field;
  alg->star_closed_ = star_closed;
  alg->basis_ = std::move(basis);
  alg->compute_flags();
  return alg;
}

void Algebra::compute_flags() {
  abelian_ = true;
  for (std::size_t i = 0; i < basis_.size() && abelian_; ++i) {
    for (std::size_t j = i + 1; j < basis_.size(); ++j) {
      const CMat c = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      if (frob(c) > kMembershipTol) {
        abelian_ = false;
        break;
      }
    }
  }
  identity_ = solve_identity(n_, basis_);
}

std::size_t Algebra::dim() const {
  return full_ ? static_cast<std::size_t>(n_ * n_) : basis_.size();
}

CMat Algebra::basis(std::size_t i) const {
  if (full_) {
    CMat e = CMat::Zero(n_, n_);
    const auto k = static_cast<Eigen::Index>(i);
    e(k / n_, k % n_) = 1.0;
    return e;
  }
  return basis_.at(i);
}

std::vector<CMat> Algebra::basis_list() const {
  if (!full_) return basis_;
  std::vector<CMat> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis(i));
  return out;
}

CVec Algebra::coords(const CMat& m) const {
  if (m.rows() != n_ || m.cols() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix size does not match the ambient dimension");
  }
  CVec c(static_cast<Eigen::Index>(dim()));
  if (full_) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < n_; ++j) c(i * n_ + j) = m(i, j);
    }
  } else {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      c(static_cast<Eigen::Index>(k)) = trace_pairing(m, basis_[k]);
    }
  }
  if (field_ == Field::Real) c = c.real().cast<Complex>();
  return c;
}

CMat Algebra::from_coords(const CVec& c) const {
  if (c.size() != static_cast<Eigen::Index>(dim())) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate vector has wrong length");
  }
  CMat m = CMat::Zero(n_, n_);
  if (full_) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < n_; ++j) m(i, j) = c(i * n_ + j);
    }
    return m;
  }
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    m += c(static_cast<Eigen::Index>(k)) * basis_[k];
  }
  return m;
}

double Algebra::residual(const CMat& m) const {
  if (full_ && field_ == Field::Complex) return 0.0;
  return frob(m - project(m));
}

bool Algebra::contains(const CMat& m, double tol) const {
  return residual(m) <= tol * std::max(1.0, frob(m));
}

std::optional<CVec> Algebra::identity_coords() const {
  if (!identity_) return std::nullopt;
  return coords(*identity_);
}

bool Algebra::contains_ambient_identity() const {
  return identity_ && frob(*identity_ - cstar::identity(n_)) <= 1e-8;
}

bool Algebra::same_as(const Algebra& other, double tol) const {
  if (this == &other) return true;
  if (n_ != other.n_ || dim() != other.dim()) return false;
  if (full_ && other.full_) return true;
  for (std::size_t i = 0; i < other.dim(); ++i) {
    if (!contains(other.basis(i), tol)) return false;
  }
  return true;
}

// Element --------------------------------------------------------------------

Element::Element(AlgebraPtr algebra, CMat m, double tol)
    : algebra_(std::move(algebra)), m_(std::move(m)) {
  const Eigen::Index n = algebra_->ambient_dim();
  if (m_.rows() != n || m_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "element size does not match the algebra");
  }
  if (!algebra_->contains(m_, tol)) {
    throw Error(ErrorCode::NotSubspace, "matrix is not in the algebra");
  }
}

Element Element::projected(AlgebraPtr algebra, const CMat& m) {
  CMat p = algebra->project(m);
  return Element(std::move(algebra), std::move(p), Unchecked{});
}

// SubspaceBasis --------------------------------------------------------------

SubspaceBasis::SubspaceBasis(const std::vector<CMat>& spanning, Eigen::Index n)
    : n_(n) {
  for (const CMat& m : spanning) {
    if (m.rows() != n || m.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "subspace vector has wrong size");
    }
    try_extend(vectors_, m, Field::Complex, kMembershipTol);
  }
}

CVec SubspaceBasis::coords(const CMat& m) const {
  CVec c(static_cast<Eigen::Index>(vectors_.size()));
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    c(static_cast<Eigen::Index>(k)) = trace_pairing(m, vectors_[k]);
  }
  return c;
}

double SubspaceBasis::residual(const CMat& m) const {
  CMat r = m;
  for (const CMat& v : vectors_) r -= trace_pairing(m, v) * v;
  return frob(r);
}

// Construction ---------------------------------------------------------------

AlgebraPtr algebra_from_generators(const std::vector<CMat>& gens,
                                   bool include_identity, Closure closure,
                                   Field field) {
  if (gens.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "at least one generator is needed to fix the ambient size");
  }
  const Eigen::Index n = gens.front().rows();
  for (const CMat& g : gens) {
    if (g.rows() != n || g.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "generators must be square of equal size");
    }
    if (field == Field::Real && !detail::is_real_matrix(g)) {
      throw Error(ErrorCode::NotRealAlgebra,
                  "real algebra requested from complex generators");
    }
  }
  const bool star = closure == Closure::Star;
  const std::size_t cap = static_cast<std::size_t>(n * n);

  std::vector<CMat> basis;
  if (include_identity) try_extend(basis, identity(n), field, kMembershipTol);
  for (const CMat& g : gens) {
    try_extend(basis, g, field, kMembershipTol);
    if (star) try_extend(basis, g.adjoint(), field, kMembershipTol);
  }

  std::size_t processed = 0;
  for (std::size_t pass = 0; pass <= cap && basis.size() < cap; ++pass) {
    const std::size_t before = basis.size();
    for (std::size_t i = 0; i < before && basis.size() < cap; ++i) {
      for (std::size_t j = 0; j < before && basis.size() < cap; ++j) {
        if (std::max(i, j) < processed) continue;
        try_extend(basis, CMat(basis[i] * basis[j]), field, kMembershipTol);
      }
    }
    if (star) {
      for (std::size_t i = processed; i < before && basis.size() < cap; ++i) {
        try_extend(basis, basis[i].adjoint(), field, kMembershipTol);
      }
    }
    processed = before;
    if (basis.size() == before) break;
  }

  if (basis.size() == cap) return Algebra::full(n, field);
  return Algebra::from_orthonormal_basis(n, std::move(basis), field, star);
}

std::optional<Element> find_identity(const AlgebraPtr& alg) {
  if (!alg->identity()) return std::nullopt;
  return Element::projected(alg, *alg->identity());
}

bool is_abelian(const Algebra& alg) { return alg.abelian(); }

std::string_view to_string(IdealKind kind) {
  switch (kind) {
    case IdealKind::TwoSided: return "two_sided";
    case IdealKind::LeftOnly: return "left_only";
    case IdealKind::RightOnly: return "right_only";
    case IdealKind::NotIdeal: return "not_ideal";
  }
  return "unknown";
}

IdealKind ideal_check(const Algebra& alg, const SubspaceBasis& s) {
  if (s.ambient_dim() != alg.ambient_dim() && s.dim() > 0) {
    throw Error(ErrorCode::DimensionMismatch, "subspace lives in another M_n");
  }
  for (const CMat& x : s.vectors()) {
    if (!alg.contains(x, 1e-8)) {
      throw Error(ErrorCode::NotSubspace, "subspace is not inside the algebra");
    }
  }
  auto inside = [&](const CMat& m) {
    return s.residual(m) <= 1e-8 * std::max(1.0, frob(m));
  };
  bool left = true;
  bool right = true;
  for (std::size_t i = 0; i < alg.dim() && (left || right); ++i) {
    const CMat a = alg.basis(i);
    for (const CMat& x : s.vectors()) {
      if (left && !inside(a * x)) left = false;
      if (right && !inside(x * a)) right = false;
    }
  }
  if (left && right) return IdealKind::TwoSided;
  if (left) return IdealKind::LeftOnly;
  if (right) return IdealKind::RightOnly;
  return IdealKind::NotIdeal;
}

CMat left_regular(const Algebra& alg, const CMat& m) {
  const auto d = static_cast<Eigen::Index>(alg.dim());
  CMat out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.col(j) = alg.coords(m * alg.basis(static_cast<std::size_t>(j)));
  }
  return out;
}

// Unitization ------------------------------------------------------------------

CMat Unitization::embed(const CMat& a, Complex x) const {
  if (was_unital) return a + x * (*original->identity());
  const Eigen::Index n = original->ambient_dim();
  CMat m = CMat::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = a + x * identity(n);
  m(n, n) = x;
  return m;
}

std::pair<CMat, Complex> Unitization::split(const CMat& m) const {
  if (was_unital) return {m, Complex(0.0)};
  const Eigen::Index n = original->ambient_dim();
  const Complex x = m(n, n);
  return {m.topLeftCorner(n, n) - x * identity(n), x};
}

double Unitization::one_norm(const CMat& a, Complex x) const {
  return op_norm(a) + std::abs(x);
}

Unitization unitize(const AlgebraPtr& alg) {
  Unitization u;
  u.original = alg;
  if (alg->unital()) {
    u.algebra = alg;
    u.was_unital = true;
    u.notice = "algebra is already unital; returned unchanged";
    return u;
  }
  const Eigen::Index n = alg->ambient_dim();
  std::vector<CMat> basis;
  for (std::size_t i = 0; i < alg->dim(); ++i) {
    CMat b = CMat::Zero(n + 1, n + 1);
    b.topLeftCorner(n, n) = alg->basis(i);
    basis.push_back(std::move(b));
  }
  try_extend(basis, identity(n + 1), alg->field(), kMembershipTol);
  u.algebra = Algebra::from_orthonormal_basis(n + 1, std::move(basis),
                                              alg->field(), alg->star_closed());
  return u;
}

// Complexification -------------------------------------------------------------

CMat Complexification::embed(const CMat& a, const CMat& b) const {
  return a + Complex(0.0, 1.0) * b;
}

double Complexification::regular_norm(const CMat& a, const CMat& b) const {
  return op_norm(left_regular(*algebra, embed(a, b)));
}

Complexification complexify(const AlgebraPtr& alg) {
  if (alg->field() != Field::Real) {
    throw Error(ErrorCode::NotRealAlgebra, "complexify needs a real algebra");
  }
  Complexification c;
  c.original = alg;
  if (alg->is_full()) {
    c.algebra = Algebra::full(alg->ambient_dim(), Field::Complex);
  } else {
    c.algebra = Algebra::from_orthonormal_basis(
        alg->ambient_dim(), alg->basis_list(), Field::Complex, alg->star_closed());
  }
  return c;
}

// Direct sums --------------------------------------------------------------------

AlgebraPtr direct_sum_algebras(const AlgebraPtr& a, const AlgebraPtr& b) {
  const Eigen::Index na = a->ambient_dim();
  const Eigen::Index nb = b->ambient_dim();
  std::vector<CMat> basis;
  basis.reserve(a->dim() + b->dim());
  for (std::size_t i = 0; i < a->dim(); ++i) {
    CMat m = CMat::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = a->basis(i);
    basis.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < b->dim(); ++i) {
    CMat m = CMat::Zero(na + nb, na + nb);
    m.bottomRightCorner(nb, nb) = b->basis(i);
    basis.push_back(std::move(m));
  }
  const Field field = (a->field() == Field::Real && b->field() == Field::Real)
                          ? Field::Real
                          : Field::Complex;
  return Algebra::from_orthonormal_basis(na + nb, std::move(basis), field,
                                         a->star_closed() && b->star_closed());
}

}  // namespace cstar
