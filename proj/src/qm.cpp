#include "cstar/qm.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cstar::qm {

namespace {

Element diagonal_operator(const BoxGrid& g, const auto& f) {
  const Eigen::Index n = g.points();
  CMat m = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = f(g.x(k));
  return Element(g.algebra(), std::move(m));
}

}  // namespace

BoxGrid::BoxGrid(double length, Eigen::Index points, double hbar, double mass)
    : length_(length), points_(points), hbar_(hbar), mass_(mass) {
  if (!(length > 0.0) || points < 2 || !(hbar > 0.0) || !(mass > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "box grid needs L > 0, N >= 2, hbar > 0 and m > 0");
  }
  algebra_ = Algebra::full(points);
}

GridState box_eigenstate(const BoxGrid& g, int n) {
  if (n < 1 || n > g.points()) {
    throw Error(ErrorCode::LevelOutOfRange,
                "level " + std::to_string(n) + " outside 1.." + std::to_string(g.points()));
  }
  const double pi = std::numbers::pi;
  const double amp = std::sqrt(2.0 / g.length());
  CVec psi(g.points());
  for (Eigen::Index k = 0; k < g.points(); ++k) {
    psi(k) = amp * std::sin(n * pi * g.x(k) / g.length());
  }
  psi /= std::sqrt(g.spacing() * psi.squaredNorm());
  return GridState{psi, g};
}

double box_energy(const BoxGrid& g, int n) {
  if (n < 1) throw Error(ErrorCode::LevelOutOfRange, "energy levels start at 1");
  const double pi = std::numbers::pi;
  const double nn = static_cast<double>(n);
  return nn * nn * pi * pi * g.hbar() * g.hbar() / (2.0 * g.mass() * g.length() * g.length());
}

Element position_operator(const BoxGrid& g) {
  return diagonal_operator(g, [](double x) { return Complex(x); });
}

Element cosine_observable(const BoxGrid& g) {
  const double w = 2.0 * std::numbers::pi / g.length();
  return diagonal_operator(g, [w](double x) { return Complex(-2.0 * std::cos(w * x)); });
}

Element phase_shift(const BoxGrid& g, double k) {
  return diagonal_operator(g, [k](double x) { return std::exp(Complex(0.0, k * x)); });
}

Element momentum_operator(const BoxGrid& g, bool periodic) {
  const Eigen::Index n = g.points();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "momentum needs N >= 3");
  const Complex c = Complex(0.0, -g.hbar()) / (2.0 * g.spacing());
  CMat m = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j + 1 < n) {
      m(j, j + 1) = c;
    } else if (periodic) {
      m(j, 0) = c;
    }
    if (j > 0) {
      m(j, j - 1) = -c;
    } else if (periodic) {
      m(j, n - 1) = -c;
    }
  }
  return Element(g.algebra(), std::move(m));
}

Complex expectation(const Element& a, const GridState& psi) {
  const CMat& m = a.matrix();
  if (m.rows() != psi.amplitudes.size()) {
    throw Error(ErrorCode::DimensionMismatch, "observable and state sizes differ");
  }
  const CVec& v = psi.amplitudes;
  CVec av;
  if (is_diagonal(m)) {
    av = m.diagonal().cwiseProduct(v);
  } else {
    av = m * v;
  }
  // <a psi, psi> = h sum_j (a psi)_j conj(psi_j)
  return psi.grid.spacing() * v.dot(av);
}

State eigenstate_functional(const BoxGrid& g, int n, const AlgebraPtr& alg) {
  if (alg->ambient_dim() != g.points()) {
    throw Error(ErrorCode::DimensionMismatch, "algebra does not act on the grid");
  }
  const GridState psi = box_eigenstate(g, n);
  return vector_state(alg, psi.amplitudes * std::sqrt(g.spacing()));
}

}  // namespace cstar::qm
