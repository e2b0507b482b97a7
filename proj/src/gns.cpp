#include <algorithm>
#include <cmath>
#include <random>

#include "cstar/spectral.hpp"
#include "cstar/states.hpp"
#include "detail.hpp"

namespace cstar {

CMat Representation::operator()(const CMat& a) const {
  const CVec c = algebra->coords(a);
  CMat out = CMat::Zero(dim, dim);
  for (std::size_t i = 0; i < basis_images.size(); ++i) {
    out += c(static_cast<Eigen::Index>(i)) * basis_images[i];
  }
  return out;
}

CVec GnsRepresentation::vector_of(const CMat& a) const {
  return coset_map * rep.algebra->coords(a);
}

GnsRepresentation gns(const Functional& f) {
  if (!is_positive_functional(f).positive) {
    throw Error(ErrorCode::NotPositive, "GNS needs a positive functional");
  }
  const AlgebraPtr& alg = f.algebra();
  const auto d = static_cast<Eigen::Index>(alg->dim());
  const CMat m = f.gram();
  const HermEig eig = herm_eig(0.5 * (m + m.adjoint()), 1.0);
  const double top = d == 0 ? 0.0 : eig.values.maxCoeff();

  // Directions with Gram eigenvalue above the cut span A / N_f.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (top > 0.0 && eig.values(k) > 1e-10 * top) keep.push_back(k);
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  CMat to_h(k, d);     // Lambda^(1/2) U*
  CMat from_h(d, k);   // U Lambda^(-1/2), a right inverse of to_h
  for (Eigen::Index r = 0; r < k; ++r) {
    const double lambda = eig.values(keep[static_cast<std::size_t>(r)]);
    const CVec u = eig.vectors.col(keep[static_cast<std::size_t>(r)]);
    to_h.row(r) = std::sqrt(lambda) * u.adjoint();
    from_h.col(r) = u / std::sqrt(lambda);
  }

  GnsRepresentation out;
  out.hilbert_dim = k;
  out.coset_map = to_h;
  out.rep.algebra = alg;
  out.rep.dim = k;
  out.rep.basis_images.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const CMat left = left_regular(*alg, alg->basis(static_cast<std::size_t>(i)));
    out.rep.basis_images.push_back(to_h * left * from_h);
  }
  if (alg->identity()) out.cyclic_vector = to_h * alg->coords(*alg->identity());
  return out;
}

GnsRepresentation gns(const State& f) {
  GnsRepresentation out = gns(f.functional());
  out.state = f;
  return out;
}

Representation direct_sum_reps(const std::vector<Representation>& reps) {
  if (reps.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to sum");
  const AlgebraPtr& alg = reps.front().algebra;
  Eigen::Index total = 0;
  for (const Representation& r : reps) {
    if (r.algebra != alg && !alg->same_as(*r.algebra)) {
      throw Error(ErrorCode::AlgebraMismatch, "representations of different algebras");
    }
    total += r.dim;
  }
  Representation out;
  out.algebra = alg;
  out.dim = total;
  for (std::size_t i = 0; i < alg->dim(); ++i) {
    CMat block = CMat::Zero(total, total);
    Eigen::Index offset = 0;
    for (const Representation& r : reps) {
      block.block(offset, offset, r.dim, r.dim) = r.basis_images[i];
      offset += r.dim;
    }
    out.basis_images.push_back(std::move(block));
  }
  return out;
}

UniversalReport universal_rep(const AlgebraPtr& alg,
                              const std::vector<State>& extra_states,
                              std::uint64_t seed, bool include_norming, int samples) {
  if (!alg->star_closed()) {
    throw Error(ErrorCode::InvalidArgument, "universal representation needs a *-algebra");
  }
  std::vector<State> states{trace_state(alg)};
  for (const State& s : extra_states) {
    if (!alg->same_as(*s.algebra())) {
      throw Error(ErrorCode::AlgebraMismatch, "extra state lives on another algebra");
    }
    states.push_back(s);
  }
  if (include_norming) {
    for (std::size_t i = 0; i < alg->dim(); ++i) {
      const CMat b = alg->basis(i);
      const CMat bb = b * b.adjoint();
      const CMat p = bb * bb;
      if (op_norm(p) <= 1e-12) continue;
      states.push_back(norming_state(Element::projected(alg, p)));
    }
  }

  std::vector<Representation> reps;
  reps.reserve(states.size());
  for (const State& s : states) {
    GnsRepresentation g = gns(s);
    if (g.hilbert_dim > 0) reps.push_back(std::move(g.rep));
  }

  UniversalReport report;
  report.representation = direct_sum_reps(reps);
  report.state_count = states.size();
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const CMat a = alg->from_coords(
        detail::gaussian_coords(rng, static_cast<Eigen::Index>(alg->dim()), alg->field()));
    const double residual = std::abs(op_norm(report.representation(a)) - op_norm(a));
    report.max_isometry_residual = std::max(report.max_isometry_residual, residual);
  }
  return report;
}

}  // namespace cstar
