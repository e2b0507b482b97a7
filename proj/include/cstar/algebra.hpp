#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cstar/linalg.hpp"

namespace cstar {

enum class Field { Real, Complex };

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// A subalgebra of n x n complex matrices given by a basis that is
/// orthonormal under the trace pairing <x, y> = trace(y* x).
///
/// The full matrix algebra M_n is kept implicit: its basis is the matrix
/// units E_ij (index i * n + j) and coordinates are the row-major entries,
/// so very large ambient dimensions cost nothing until a basis element is
/// actually requested.
class Algebra {
 public:
  static AlgebraPtr full(Eigen::Index n, Field field = Field::Complex);

  /// Wraps an already orthonormal basis (checked) and caches the
  /// identity and commutativity flags.
  static AlgebraPtr from_orthonormal_basis(Eigen::Index n,
                                           std::vector<CMat> basis,
                                           Field field, bool star_closed);

  Eigen::Index ambient_dim() const { return n_; }
  std::size_t dim() const;
  Field field() const { return field_; }
  bool is_full() const { return full_; }
  bool star_closed() const { return star_closed_; }
  bool abelian() const { return abelian_; }
  bool unital() const { return identity_.has_value(); }

  CMat basis(std::size_t i) const;
  std::vector<CMat> basis_list() const;

  /// Coordinates of the orthogonal projection of m onto the span.
  CVec coords(const CMat& m) const;
  CMat from_coords(const CVec& c) const;
  CMat project(const CMat& m) const { return from_coords(coords(m)); }
  /// Frobenius distance from m to the span.
  double residual(const CMat& m) const;
  bool contains(const CMat& m, double tol = kDefaultTol) const;

  /// Matrix of the identity element, when one exists. It need not be the
  /// ambient identity (e.g. the corner algebra diag(a, 0)).
  const std::optional<CMat>& identity() const { return identity_; }
  std::optional<CVec> identity_coords() const;
  /// True when the algebra is unital with unit equal to the ambient I_n.
  bool contains_ambient_identity() const;

  bool same_as(const Algebra& other, double tol = kDefaultTol) const;

 private:
  Algebra() = default;
  void compute_flags();

  Eigen::Index n_ = 0;
  bool full_ = false;
  Field field_ = Field::Complex;
  bool star_closed_ = true;
  bool abelian_ = false;
  std::vector<CMat> basis_;
  std::optional<CMat> identity_;
};

/// A matrix tagged with the algebra it lives in.
class Element {
 public:
  /// Throws NotSubspace when m is not in the algebra's span.
  Element(AlgebraPtr algebra, CMat m, double tol = 1e-8);

  /// Orthogonal projection of m onto the algebra; no membership check.
  static Element projected(AlgebraPtr algebra, const CMat& m);

  const AlgebraPtr& algebra() const { return algebra_; }
  const CMat& matrix() const { return m_; }
  CVec coords() const { return algebra_->coords(m_); }

 private:
  struct Unchecked {};
  Element(AlgebraPtr algebra, CMat m, Unchecked)
      : algebra_(std::move(algebra)), m_(std::move(m)) {}

  AlgebraPtr algebra_;
  CMat m_;
};

/// Linearly independent matrices spanning a subspace; stored orthonormal
/// under the trace pairing.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  /// Orthonormalizes; dependent inputs are dropped.
  explicit SubspaceBasis(const std::vector<CMat>& spanning, Eigen::Index n);

  const std::vector<CMat>& vectors() const { return vectors_; }
  std::size_t dim() const { return vectors_.size(); }
  Eigen::Index ambient_dim() const { return n_; }
  CVec coords(const CMat& m) const;
  double residual(const CMat& m) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<CMat> vectors_;
};

// Closure and construction ---------------------------------------------------

enum class Closure { Star, ProductsOnly };

/// Smallest algebra containing gens (and I_n when include_identity). With
/// Closure::Star the result is also closed under the adjoint.
AlgebraPtr algebra_from_generators(const std::vector<CMat>& gens,
                                   bool include_identity,
                                   Closure closure = Closure::Star,
                                   Field field = Field::Complex);

std::optional<Element> find_identity(const AlgebraPtr& alg);

bool is_abelian(const Algebra& alg);

enum class IdealKind { TwoSided, LeftOnly, RightOnly, NotIdeal };

std::string_view to_string(IdealKind kind);

/// Throws NotSubspace if s is not contained in the algebra.
IdealKind ideal_check(const Algebra& alg, const SubspaceBasis& s);

// Quotients ------------------------------------------------------------------

class QuotientAlgebra {
 public:
  const AlgebraPtr& parent() const { return parent_; }
  const SubspaceBasis& ideal() const { return ideal_; }
  const std::vector<CMat>& coset_basis() const { return coset_basis_; }
  std::size_t dim() const { return coset_basis_.size(); }

  /// Coordinates of the coset [m] in the complement basis.
  CVec coset(const CMat& m) const;
  /// Product of two cosets via the multiplication table.
  CVec multiply(const CVec& x, const CVec& y) const;
  /// table()[i][j] are the coordinates of [c_i][c_j].
  const std::vector<std::vector<CVec>>& table() const { return table_; }
  const std::optional<CVec>& identity() const { return identity_; }

 private:
  friend QuotientAlgebra quotient(const AlgebraPtr&, const SubspaceBasis&);
  AlgebraPtr parent_;
  SubspaceBasis ideal_;
  std::vector<CMat> coset_basis_;
  std::vector<std::vector<CVec>> table_;
  std::optional<CVec> identity_;
};

QuotientAlgebra quotient(const AlgebraPtr& alg, const SubspaceBasis& ideal);

struct QuotientNormOptions {
  int budget = 20000;  // objective evaluations over all restarts
  int restarts = 8;
  std::uint64_t seed = 0;
};

/// inf over b in the ideal of op_norm(a + b), by Nelder-Mead over ideal
/// coordinates.
double quotient_norm(const QuotientAlgebra& q, const Element& a,
                     const QuotientNormOptions& options = {});

// Unitization, complexification, direct sums ---------------------------------

/// The pair (a, x) is realized as diag(a + x I_n, x) in M_{n+1}.
struct Unitization {
  AlgebraPtr algebra;
  AlgebraPtr original;
  bool was_unital = false;
  std::string notice;

  CMat embed(const CMat& a, Complex x = 0.0) const;
  std::pair<CMat, Complex> split(const CMat& m) const;
  /// ||(a, x)||_1 = ||a|| + |x|.
  double one_norm(const CMat& a, Complex x) const;
};

Unitization unitize(const AlgebraPtr& alg);

struct Complexification {
  AlgebraPtr algebra;   // complex span of the real basis
  AlgebraPtr original;  // the real algebra

  /// (a, b) realized as a + i b.
  CMat embed(const CMat& a, const CMat& b) const;
  /// Operator norm of left multiplication by a + i b on the algebra, with
  /// the Hilbert-Schmidt norm on the algebra. Secondary report value.
  double regular_norm(const CMat& a, const CMat& b) const;
};

/// Throws NotRealAlgebra unless alg is flagged real.
Complexification complexify(const AlgebraPtr& alg);

AlgebraPtr direct_sum_algebras(const AlgebraPtr& a, const AlgebraPtr& b);

/// Left multiplication by m as a matrix on the algebra's coordinates.
CMat left_regular(const Algebra& alg, const CMat& m);

}  // namespace cstar
