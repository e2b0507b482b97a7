#include "cstar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cstar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSubspace: return "NotSubspace";
    case ErrorCode::NotTwoSided: return "NotTwoSided";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotRealAlgebra: return "NotRealAlgebra";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NonAbelian: return "NonAbelian";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

namespace {

void require_square(const CMat& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + " needs a square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double off_diagonal_norm(const CMat& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Rotation acting on coordinates (p, q):
//   [ jpp jpq ]
//   [ jqp jqq ]
struct Rotation {
  Eigen::Index p, q;
  Complex jpp, jpq, jqp, jqq;
};

void apply_right(CMat& a, const Rotation& r) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex aip = a(i, r.p);
    const Complex aiq = a(i, r.q);
    a(i, r.p) = aip * r.jpp + aiq * r.jqp;
    a(i, r.q) = aip * r.jpq + aiq * r.jqq;
  }
}

void apply_left_adjoint(CMat& a, const Rotation& r) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex apj = a(r.p, j);
    const Complex aqj = a(r.q, j);
    a(r.p, j) = std::conj(r.jpp) * apj + std::conj(r.jqp) * aqj;
    a(r.q, j) = std::conj(r.jpq) * apj + std::conj(r.jqq) * aqj;
  }
}

}  // namespace

CMat adjoint(const CMat& m) { return m.adjoint(); }

double frob(const CMat& m) { return m.norm(); }

CMat identity(Eigen::Index n) { return CMat::Identity(n, n); }

bool is_diagonal(const CMat& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

Complex trace_pairing(const CMat& x, const CMat& y) {
  // trace(y* x) = sum_ij conj(y_ij) x_ij
  return (y.conjugate().cwiseProduct(x)).sum();
}

HermEig herm_eig(const CMat& m, double tol) {
  require_square(m, "herm_eig");
  const Eigen::Index n = m.rows();
  const double scale = frob(m);
  if (frob(m - m.adjoint()) > tol * scale) {
    throw Error(ErrorCode::NotHermitian, "herm_eig input is not Hermitian");
  }
  CMat a = (m + m.adjoint()) * 0.5;
  CMat v = CMat::Identity(n, n);
  const double target = 1e-12 * scale;
  constexpr int kMaxSweeps = 100;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Phase rotation diag(1, conj(phase)) followed by a real Jacobi
        // rotation.
        const Rotation r{p, q, c, s, -s * std::conj(phase),
                         c * std::conj(phase)};
        apply_right(a, r);
        apply_left_adjoint(a, r);
        apply_right(v, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > target) {
    throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return a(i, i).real() < a(j, j).real();
                   });
  HermEig out{RVec(n), CMat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (is_diagonal(m)) return m.diagonal().cwiseAbs().maxCoeff();
  const CMat gram = m.adjoint() * m;
  const double top = herm_eig(gram).values.maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

RVec singular_values(const CMat& m) {
  const Eigen::Index r = m.rows();
  const Eigen::Index c = m.cols();
  const Eigen::Index k = std::min(r, c);
  if (k == 0) return RVec(0);
  CMat dilation = CMat::Zero(r + c, r + c);
  dilation.topRightCorner(r, c) = m;
  dilation.bottomLeftCorner(c, r) = m.adjoint();
  const RVec ev = herm_eig(dilation).values;
  RVec out = ev.tail(k);
  for (Eigen::Index i = 0; i < k; ++i) out(i) = std::max(out(i), 0.0);
  return out;
}

double smallest_singular_value(const CMat& m) {
  const RVec s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

CMat invert(const CMat& m, double tol) {
  require_square(m, "invert");
  const RVec s = singular_values(m);
  if (s.size() == 0) return m;
  if (s(0) <= tol * s(s.size() - 1)) {
    throw Error(ErrorCode::Singular,
                "smallest singular value " + std::to_string(s(0)));
  }
  return m.fullPivLu().inverse();
}

namespace {

void to_hessenberg(CMat& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    CVec x = h.block(k + 1, k, len, 1);
    const double xnorm = x.norm();
    if (xnorm == 0.0 || x.tail(len - 1).norm() == 0.0) continue;
    const double x0abs = std::abs(x(0));
    const Complex phase = x0abs == 0.0 ? Complex(1.0) : x(0) / x0abs;
    CVec v = x;
    v(0) += phase * xnorm;
    v.normalize();
    // H <- P H P with P = I - 2 v v*
    auto rows = h.bottomRows(len);
    rows -= 2.0 * v * (v.adjoint() * rows);
    auto cols = h.rightCols(len);
    cols -= 2.0 * (cols * v) * v.adjoint();
    h.block(k + 2, k, len - 1, 1).setZero();
  }
}

}  // namespace

std::vector<Complex> eig_general(const CMat& m, int max_iterations) {
  require_square(m, "eig_general");
  const Eigen::Index n = m.rows();
  if (n == 0) return {};
  CMat h = m;
  to_hessenberg(h);
  const double scale = frob(m);
  const double deflate_abs = 1e-12 * scale;
  constexpr double kEps = 2.220446049250313e-16;

  Eigen::Index hi = n - 1;
  int iterations = 0;
  int since_deflation = 0;
  while (hi > 0) {
    Eigen::Index lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double local =
          std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= deflate_abs || sub <= kEps * local) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++iterations > max_iterations) {
      throw Error(ErrorCode::NoConvergence,
                  "QR iteration budget of " + std::to_string(max_iterations) +
                      " exhausted");
    }
    ++since_deflation;

    Complex shift;
    if (since_deflation % 11 == 10) {
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const Complex a = h(hi - 1, hi - 1);
      const Complex b = h(hi - 1, hi);
      const Complex c = h(hi, hi - 1);
      const Complex d = h(hi, hi);
      const Complex half_tr = 0.5 * (a + d);
      const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
      const Complex mu1 = half_tr + disc;
      const Complex mu2 = half_tr - disc;
      shift = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
    }

    for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) -= shift;
    std::vector<std::pair<Complex, Complex>> rot;
    rot.reserve(static_cast<std::size_t>(hi - lo));
    for (Eigen::Index k = lo; k < hi; ++k) {
      const Complex x = h(k, k);
      const Complex y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Complex c = 1.0;
      Complex s = 0.0;
      if (r != 0.0) {
        c = x / r;
        s = y / r;
      }
      rot.emplace_back(c, s);
      for (Eigen::Index j = k; j <= hi; ++j) {
        const Complex h1 = h(k, j);
        const Complex h2 = h(k + 1, j);
        h(k, j) = std::conj(c) * h1 + std::conj(s) * h2;
        h(k + 1, j) = -s * h1 + c * h2;
      }
    }
    for (Eigen::Index k = lo; k < hi; ++k) {
      const auto [c, s] = rot[static_cast<std::size_t>(k - lo)];
      const Eigen::Index last = std::min(k + 2, hi);
      for (Eigen::Index i = lo; i <= last; ++i) {
        const Complex h1 = h(i, k);
        const Complex h2 = h(i, k + 1);
        h(i, k) = h1 * c + h2 * s;
        h(i, k + 1) = -h1 * std::conj(s) + h2 * std::conj(c);
      }
    }
    for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) += shift;
  }

  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = h(k, k);
  return out;
}

CMat null_basis(const CMat& g, double tol) {
  const HermEig eig = herm_eig(g, tol);
  const Eigen::Index n = g.rows();
  const double top = n == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  const double threshold = tol * top;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.values(k) <= threshold) keep.push_back(k);
  }
  CMat out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(keep[k]);
  }
  return out;
}

CMat kernel(const CMat& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return identity(n);
  // Right singular vectors straight from the SVD: going through m* m would
  // square the singular values and lose everything below sqrt(eps).
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double threshold = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace cstar
