#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "cstar/algebra.hpp"
#include "detail.hpp"

namespace cstar {

QuotientAlgebra quotient(const AlgebraPtr& alg, const SubspaceBasis& ideal) {
  if (ideal_check(*alg, ideal) != IdealKind::TwoSided) {
    throw Error(ErrorCode::NotTwoSided, "quotient needs a two-sided ideal");
  }
  if (ideal.dim() >= alg->dim()) {
    throw Error(ErrorCode::NotProper, "ideal is the whole algebra");
  }
  QuotientAlgebra q;
  q.parent_ = alg;
  q.ideal_ = ideal;

  std::vector<CMat> working = ideal.vectors();
  for (std::size_t i = 0; i < alg->dim() && working.size() < alg->dim(); ++i) {
    detail::try_extend(working, alg->basis(i), alg->field(), 1e-9);
  }
  q.coset_basis_.assign(working.begin() + static_cast<std::ptrdiff_t>(ideal.dim()),
                        working.end());

  const std::size_t k = q.coset_basis_.size();
  q.table_.assign(k, std::vector<CVec>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      q.table_[i][j] = q.coset(q.coset_basis_[i] * q.coset_basis_[j]);
    }
  }
  if (alg->identity()) q.identity_ = q.coset(*alg->identity());
  return q;
}

CVec QuotientAlgebra::coset(const CMat& m) const {
  CVec c(static_cast<Eigen::Index>(coset_basis_.size()));
  for (std::size_t k = 0; k < coset_basis_.size(); ++k) {
    c(static_cast<Eigen::Index>(k)) = trace_pairing(m, coset_basis_[k]);
  }
  return c;
}

CVec QuotientAlgebra::multiply(const CVec& x, const CVec& y) const {
  const auto k = static_cast<Eigen::Index>(coset_basis_.size());
  if (x.size() != k || y.size() != k) {
    throw Error(ErrorCode::DimensionMismatch, "coset vector has wrong length");
  }
  CVec out = CVec::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      out += x(i) * y(j) * table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

namespace {

struct SimplexResult {
  Eigen::VectorXd best;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead with the standard coefficients (1, 2, 0.5, 0.5).
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start,
                          const Eigen::VectorXd& steps, int budget) {
  const Eigen::Index dim = start.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(dim + 1), start);
  for (Eigen::Index i = 0; i < dim; ++i) pts[static_cast<std::size_t>(i + 1)](i) += steps(i);
  std::vector<double> vals(pts.size());
  SimplexResult res;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  res.evaluations = static_cast<int>(pts.size());

  std::vector<std::size_t> order(pts.size());
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[order.size() - 2];
    if (vals[hi] - vals[lo] <= 1e-12 * (1.0 + std::abs(vals[lo]))) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= budget) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != hi) centroid += pts[i];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[hi]);
    const double fr = f(reflected);
    ++res.evaluations;
    if (fr < vals[lo]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[hi]);
      const double fe = f(expanded);
      ++res.evaluations;
      if (fe < fr) {
        pts[hi] = expanded;
        vals[hi] = fe;
      } else {
        pts[hi] = reflected;
        vals[hi] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[hi] = reflected;
      vals[hi] = fr;
      continue;
    }
    const bool outside = fr < vals[hi];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (pts[hi] - centroid));
    const double fc = f(contracted);
    ++res.evaluations;
    if (fc < std::min(fr, vals[hi])) {
      pts[hi] = contracted;
      vals[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == lo) continue;
      pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
      vals[i] = f(pts[i]);
      ++res.evaluations;
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.best = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace

double quotient_norm(const QuotientAlgebra& q, const Element& a,
                     const QuotientNormOptions& options) {
  const Algebra& parent = *q.parent();
  if (!parent.contains(a.matrix(), 1e-8)) {
    throw Error(ErrorCode::NotSubspace, "element is not in the parent algebra");
  }
  const CMat& m = a.matrix();
  const double base = op_norm(m);
  const std::vector<CMat>& ideal = q.ideal().vectors();
  if (ideal.empty()) return base;

  const bool complex = parent.field() == Field::Complex;
  const auto per = complex ? 2 : 1;
  const auto dim = static_cast<Eigen::Index>(ideal.size()) * per;

  auto combine = [&](const Eigen::VectorXd& t) {
    CMat x = m;
    for (std::size_t k = 0; k < ideal.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k) * per;
      const Complex c = complex ? Complex(t(i), t(i + 1)) : Complex(t(i), 0.0);
      x += c * ideal[k];
    }
    return x;
  };
  auto objective = [&](const Eigen::VectorXd& t) { return op_norm(combine(t)); };

  Eigen::VectorXd projection(dim);
  const CVec pc = q.ideal().coords(m);
  for (Eigen::Index k = 0; k < pc.size(); ++k) {
    if (complex) {
      projection(2 * k) = -pc(k).real();
      projection(2 * k + 1) = -pc(k).imag();
    } else {
      projection(k) = -pc(k).real();
    }
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::max(base, 1e-3);
  const int restarts = std::max(options.restarts, 1);
  const int per_run = std::max(options.budget / restarts, 4 * static_cast<int>(dim) + 8);

  Eigen::VectorXd best_point = Eigen::VectorXd::Zero(dim);
  double best = base;
  bool any_converged = false;
  int spent = 0;
  for (int r = 0; r < restarts && spent < options.budget; ++r) {
    Eigen::VectorXd start;
    if (r == 0) {
      start = Eigen::VectorXd::Zero(dim);
    } else if (r == 1) {
      start = projection;
    } else {
      start = best_point;
    }
    // Later restarts re-seed a fresh, randomly oriented simplex around the
    // incumbent with shrinking size.
    Eigen::VectorXd steps(dim);
    const double size = scale * 0.5 * std::pow(0.5, std::max(0, r - 2));
    for (Eigen::Index i = 0; i < dim; ++i) {
      steps(i) = (r < 2 ? size : size * normal(rng));
    }
    const SimplexResult run = nelder_mead(objective, start, steps,
                                          std::min(per_run, options.budget - spent));
    spent += run.evaluations;
    any_converged = any_converged || run.converged;
    if (run.value < best) {
      best = run.value;
      best_point = run.best;
    }
  }
  if (!any_converged) {
    throw Error(ErrorCode::BudgetExceeded,
                "Nelder-Mead did not stabilize within the evaluation budget");
  }
  return std::min(best, base);
}

}  // namespace cstar
