#include "cstar/gelfand.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cstar/spectral.hpp"
#include "detail.hpp"

namespace cstar {

namespace {

constexpr double kDedupeRadius = 1e-7;
constexpr double kKernelTol = 1e-7;

// Kernel of m, never empty: falls back to the least singular direction.
CMat kernel_nonempty(const CMat& m) {
  CMat k = kernel(m, kKernelTol);
  if (k.cols() > 0) return k;
  const HermEig eig = herm_eig(m.adjoint() * m);
  return eig.vectors.col(0);
}

double scalar_defect(const CMat& b) {
  const auto k = static_cast<double>(b.rows());
  const Complex mean = b.trace() / k;
  return frob(b - mean * identity(b.rows()));
}

// Splits the common invariant subspace spanned by the columns of space until
// every basis element acts on each piece as a scalar; each piece is a joint
// eigenspace and yields one candidate character.
void refine(const std::vector<CMat>& basis, const CMat& space,
            std::vector<CVec>& out, int depth) {
  const Eigen::Index k = space.cols();
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::vector<CMat> compressed;
  compressed.reserve(basis.size());
  for (const CMat& e : basis) compressed.push_back(space.adjoint() * e * space);

  if (k > 1 && depth < 64) {
    for (const CMat& b : compressed) {
      if (scalar_defect(b) <= 1e-8 * std::max(1.0, frob(b))) continue;
      const std::vector<Complex> eig = eig_general(b);
      double r = 0.0;
      for (const Complex& z : eig) r = std::max(r, std::abs(z));
      for (const Complex& mu : dedupe(eig, clustering_radius(r))) {
        const CMat sub = kernel_nonempty(b - mu * identity(k));
        refine(basis, space * sub, out, depth + 1);
      }
      return;
    }
  }
  CVec values(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    values(i) = compressed[static_cast<std::size_t>(i)].trace() / static_cast<double>(k);
  }
  out.push_back(values);
}

}  // namespace

double Character::multiplicativity_defect() const {
  double worst = 0.0;
  const std::size_t d = algebra->dim();
  for (std::size_t i = 0; i < d; ++i) {
    const CMat ei = algebra->basis(i);
    for (std::size_t j = 0; j < d; ++j) {
      const CMat ej = algebra->basis(j);
      const Complex lhs = (*this)(CMat(ei * ej));
      const Complex rhs = values(static_cast<Eigen::Index>(i)) *
                          values(static_cast<Eigen::Index>(j));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

GelfandSpectrumData characters(const AlgebraPtr& alg, std::uint64_t seed) {
  if (!alg->abelian()) {
    throw Error(ErrorCode::NonAbelian, "characters are computed for abelian algebras");
  }
  GelfandSpectrumData data;
  data.algebra = alg;
  const std::size_t d = alg->dim();
  const Eigen::Index n = alg->ambient_dim();
  if (d == 0) return data;
  const std::vector<CMat> basis = alg->basis_list();

  // Eigenspaces of a generic element separate the joint eigenspaces; any
  // accidental collision is resolved by refine().
  std::mt19937_64 rng(seed);
  const CVec t = detail::gaussian_coords(rng, static_cast<Eigen::Index>(d), Field::Complex);
  CMat g = CMat::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i) g += t(static_cast<Eigen::Index>(i)) * basis[i];

  const std::vector<Complex> eig = eig_general(g);
  double r = 0.0;
  for (const Complex& z : eig) r = std::max(r, std::abs(z));
  std::vector<CVec> candidates;
  for (const Complex& lambda : dedupe(eig, clustering_radius(r))) {
    refine(basis, kernel_nonempty(g - lambda * identity(n)), candidates, 0);
  }

  for (const CVec& values : candidates) {
    if (values.cwiseAbs().maxCoeff() <= 1e-9) continue;  // zero functional
    Character chi{alg, values};
    if (chi.multiplicativity_defect() > 1e-8) continue;
    if (alg->unital() && std::abs(chi(*alg->identity()) - 1.0) > 1e-8) continue;
    const bool duplicate =
        std::any_of(data.characters.begin(), data.characters.end(), [&](const Character& c) {
          return (c.values - values).cwiseAbs().maxCoeff() <= kDedupeRadius;
        });
    if (!duplicate) data.characters.push_back(std::move(chi));
  }
  return data;
}

CVec gelfand_transform(const Element& a, const GelfandSpectrumData& spec) {
  CVec out(static_cast<Eigen::Index>(spec.characters.size()));
  const CVec c = spec.algebra->coords(a.matrix());
  for (std::size_t k = 0; k < spec.characters.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = (c.array() * spec.characters[k].values.array()).sum();
  }
  return out;
}

IsometryReport gelfand_isometry_report(const AlgebraPtr& alg, int samples,
                                       std::uint64_t seed) {
  const GelfandSpectrumData spec = characters(alg, seed);
  IsometryReport report;
  report.star_closed = alg->star_closed();
  report.character_count = spec.characters.size();

  const auto d = static_cast<Eigen::Index>(alg->dim());
  const auto k = static_cast<Eigen::Index>(spec.characters.size());
  CMat transform(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    transform.row(i) = spec.characters[static_cast<std::size_t>(i)].values.transpose();
  }
  const CMat ker = kernel(transform, 1e-9);
  for (Eigen::Index j = 0; j < ker.cols(); ++j) {
    report.transform_kernel.push_back(alg->from_coords(ker.col(j)));
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < samples; ++s) {
    const CMat a = alg->from_coords(detail::gaussian_coords(rng, d, alg->field()));
    const Element el = Element::projected(alg, a);
    const CVec hat = gelfand_transform(el, spec);
    IsometrySample sample;
    sample.transform_sup = k == 0 ? 0.0 : hat.cwiseAbs().maxCoeff();
    sample.spectral_radius = spectrum(el).radius;
    sample.norm = op_norm(a);
    sample.radius_residual = sample.transform_sup - sample.spectral_radius;
    sample.norm_residual = sample.transform_sup - sample.norm;
    report.max_radius_residual =
        std::max(report.max_radius_residual, std::abs(sample.radius_residual));
    report.max_norm_residual = std::max(report.max_norm_residual, std::abs(sample.norm_residual));
    report.samples.push_back(sample);
  }
  return report;
}

SubspaceBasis char_kernel(const Character& chi) {
  const CMat row = chi.values.transpose();
  const CMat ker = kernel(row, 1e-9);
  std::vector<CMat> vectors;
  for (Eigen::Index j = 0; j < ker.cols(); ++j) {
    vectors.push_back(chi.algebra->from_coords(ker.col(j)));
  }
  return SubspaceBasis(vectors, chi.algebra->ambient_dim());
}

GkzResult gkz_witness(const Functional& phi, std::uint64_t seed, int attempts) {
  const AlgebraPtr& alg = phi.algebra();
  if (!alg->unital()) throw Error(ErrorCode::NotUnital, "GKZ needs a unital algebra");
  if (std::abs(phi(*alg->identity()) - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotNormalized, "GKZ needs phi(1) = 1");
  }
  const Character as_character{alg, phi.values()};
  if (as_character.multiplicativity_defect() <= 1e-9 * std::max(1.0, phi.values().cwiseAbs2().sum())) {
    return CharacterVerdict{};
  }

  const CMat ker = kernel(CMat(phi.values().transpose()), 1e-9);
  const Eigen::Index n = alg->ambient_dim();
  const CMat complement = identity(n) - *alg->identity();
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const CVec t = detail::gaussian_coords(rng, ker.cols(), Field::Complex);
    CMat a = alg->from_coords(ker * t);
    const double norm = op_norm(a);
    if (norm == 0.0) continue;
    a /= norm;
    const double smin = smallest_singular_value(a + complement);
    const Complex value = phi(a);
    if (smin > 1e-8 && std::abs(value) <= 1e-9) {
      return GkzWitness{Element::projected(alg, a), smin, value, attempt};
    }
  }
  throw Error(ErrorCode::WitnessNotFound,
              "no invertible kernel element after " + std::to_string(attempts) + " attempts");
}

CMat circulant(const CVec& c) {
  const Eigen::Index n = c.size();
  CMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = c(((i - j) % n + n) % n);
  }
  return m;
}

AlgebraPtr cyclic_group_algebra(Eigen::Index N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "cyclic group order must be >= 1");
  std::vector<CMat> basis;
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (Eigen::Index k = 0; k < N; ++k) {
    CVec delta = CVec::Zero(N);
    delta(k) = scale;
    basis.push_back(circulant(delta));
  }
  return Algebra::from_orthonormal_basis(N, std::move(basis), Field::Complex, true);
}

CVec conv(const CVec& x, const CVec& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "convolution needs equal lengths");
  }
  const Eigen::Index n = x.size();
  CVec out = CVec::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index m = 0; m < n; ++m) out(k) += x(m) * y(((k - m) % n + n) % n);
  }
  return out;
}

}  // namespace cstar
