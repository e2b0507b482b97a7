#pragma once

#include "cstar/algebra.hpp"
#include "cstar/states.hpp"

namespace cstar::qm {

/// Particle in the box [0, L], sampled at the N interior points
/// x_j = j L / (N + 1), j = 1..N. Dirichlet endpoints are excluded.
class BoxGrid {
 public:
  BoxGrid(double length, Eigen::Index points, double hbar = 1.0, double mass = 1.0);

  double length() const { return length_; }
  Eigen::Index points() const { return points_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  double spacing() const { return length_ / static_cast<double>(points_ + 1); }
  /// Abscissa of the k-th sample, k = 0..N-1.
  double x(Eigen::Index k) const { return static_cast<double>(k + 1) * spacing(); }

  /// M_N over the grid; every observable below is an element of it.
  const AlgebraPtr& algebra() const { return algebra_; }

 private:
  double length_;
  Eigen::Index points_;
  double hbar_;
  double mass_;
  AlgebraPtr algebra_;
};

/// Amplitudes normalized so that spacing * sum |psi_j|^2 = 1.
struct GridState {
  CVec amplitudes;
  BoxGrid grid;
};

GridState box_eigenstate(const BoxGrid& g, int n);

/// n^2 pi^2 hbar^2 / (2 m L^2)
double box_energy(const BoxGrid& g, int n);

Element position_operator(const BoxGrid& g);

/// -2 cos(2 pi x / L) as a multiplication operator.
Element cosine_observable(const BoxGrid& g);

/// diag(exp(i k x_j)).
Element phase_shift(const BoxGrid& g, double k);

/// -i hbar times the central difference; with periodic wrap-around when
/// requested.
Element momentum_operator(const BoxGrid& g, bool periodic);

/// <a psi, psi> with the spacing-weighted inner product.
Complex expectation(const Element& a, const GridState& psi);

/// Vector state of psi_n restricted to alg.
State eigenstate_functional(const BoxGrid& g, int n, const AlgebraPtr& alg);

}  // namespace cstar::qm
