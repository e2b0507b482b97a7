#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "cstar/qm.hpp"
#include "cstar/spectral.hpp"
#include "support.hpp"

using namespace cstar;
using namespace testing_support;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

Element full(const CMat& m) { return Element(Algebra::full(m.rows()), m); }

std::vector<Complex> points_of(const CMat& m) { return spectrum(full(m)).points; }

}  // namespace

TEST_CASE("spectrum examples") {
  CHECK(set_distance(points_of(mat({{3, 2}, {1, 4}})), {2.0, 5.0}) < 1e-12);
  const CMat j = mat({{0, -1}, {1, 0}});
  CHECK(spectrum(full(j), FieldMode::Real).points.empty());
  CHECK(spectrum(full(j), FieldMode::Real).radius == 0.0);
  CHECK(set_distance(points_of(j), {Complex(0, 1), Complex(0, -1)}) < 1e-12);
  const SpectrumReport nil = spectrum(full(mat({{0, 1}, {0, 0}})));
  REQUIRE(nil.points.size() == 1);
  CHECK(std::abs(nil.points[0]) < 1e-12);
}

TEST_CASE("spectrum report invariants") {
  Rng rng(30);
  for (int t = 0; t < 20; ++t) {
    const CMat a = rng.matrix(5);
    const SpectrumReport s = spectrum(full(a));
    double r = 0.0;
    for (const Complex& z : s.points) r = std::max(r, std::abs(z));
    CHECK(s.radius == doctest::Approx(r));
    // every point is an eigenvalue of the matrix
    const auto oracle = eigen_eigenvalues(a);
    CHECK(set_distance(s.points, oracle) < clustering_radius(s.radius) * 10);
  }
}

TEST_CASE("spectrum of a non-unital element uses the unitization") {
  const auto nil =
      algebra_from_generators({unit_matrix(2, 0, 1)}, false, Closure::ProductsOnly);
  const SpectrumReport s = spectrum(Element(nil, 4.0 * unit_matrix(2, 0, 1)));
  REQUIRE(s.points.size() == 1);
  CHECK(std::abs(s.points[0]) < 1e-12);
}

TEST_CASE("spectrum in a corner algebra is relative to its unit") {
  std::vector<CMat> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gens.push_back(unit_matrix(3, i, j));
  const auto corner = algebra_from_generators(gens, false);
  CMat a = CMat::Zero(3, 3);
  a.topLeftCorner(2, 2) = mat({{3, 2}, {1, 4}});
  CHECK(set_distance(spectrum(Element(corner, a)).points, {2.0, 5.0}) < 1e-10);
}

TEST_CASE("non-empty compact spectrum inside the norm disc") {
  Rng rng(31);
  for (int n : {1, 2, 4, 7}) {
    for (int t = 0; t < 20; ++t) {
      const CMat a = rng.matrix(n);
      const SpectrumReport s = spectrum(full(a));
      CHECK_FALSE(s.points.empty());
      CHECK(s.radius <= op_norm(a) + 1e-9);
    }
  }
}

TEST_CASE("resolvent") {
  const auto m2 = Algebra::full(2);
  CHECK(max_abs_diff(resolvent(Element(m2, CMat::Zero(2, 2)), 1.0).matrix(), -identity(2)) <
        1e-15);
  const auto c = Algebra::full(1);
  CHECK(std::abs(resolvent(Element(c, mat({{2}})), 1.0).matrix()(0, 0) - 1.0) < 1e-15);

  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    const CMat a = rng.matrix(3);
    const Complex z = 4.0 * rng.cnormal();
    const Complex w = 4.0 * rng.cnormal();
    if (set_distance({z}, eigen_eigenvalues(a)) < 0.5 || set_distance({w}, eigen_eigenvalues(a)) < 0.5)
      continue;
    const CMat fz = resolvent(full(a), z).matrix();
    const CMat fw = resolvent(full(a), w).matrix();
    CHECK(max_abs_diff((a - z * identity(3)) * fz, identity(3)) < 1e-10);
    CHECK(op_norm(CMat(fz - fw - (z - w) * fz * fw)) <= 1e-9);
  }
  CHECK(code_of([] { resolvent(full(mat({{3, 2}, {1, 4}})), 2.0); }) ==
        ErrorCode::SingularResolvent);
}

TEST_CASE("spectral radius trace examples") {
  const CMat a = mat({{1, 1}, {0, 2}});
  CHECK(std::abs(power_norm_root(a, 100) - 2.00694) < 1e-4);
  const RadiusTrace t = spectral_radius_limit(full(a), 1024);
  CHECK(t.eigen_radius == doctest::Approx(2.0));
  CHECK(t.gap <= 1e-3);
  CHECK(t.terms.front().first == 1);
  CHECK(t.terms.back().first == 1024);
  for (std::size_t k = 1; k < t.terms.size(); ++k) {
    CHECK(t.terms[k].second <= t.terms[k - 1].second + 1e-12);
    CHECK(t.terms[k].second > 0.0);
  }
  // power 100 by the oracle
  CMat p = identity(2);
  for (int k = 0; k < 100; ++k) p = p * a;
  CHECK(power_norm_root(a, 100) == doctest::Approx(std::pow(svd_norm(p), 0.01)).epsilon(1e-12));

  const RadiusTrace nil = spectral_radius_limit(full(mat({{0, 1}, {0, 0}})), 64);
  CHECK(nil.terms[0].second == doctest::Approx(1.0));
  for (std::size_t k = 1; k < nil.terms.size(); ++k) CHECK(nil.terms[k].second == 0.0);
  CHECK(nil.estimate == 0.0);

  const RadiusTrace id = spectral_radius_limit(full(identity(3)), 100);
  for (const auto& [n, v] : id.terms) CHECK(v == doctest::Approx(1.0));
  CHECK(id.terms.back().first == 100);

  CHECK(code_of([] { spectral_radius_limit(full(identity(2)), 0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("large powers do not overflow") {
  const CMat a = mat({{1e3, 1e3}, {0, 2e3}});
  const RadiusTrace t = spectral_radius_limit(full(a), 4096);
  CHECK(std::isfinite(t.estimate));
  CHECK(std::abs(t.estimate - 2e3) < 2.0);
}

TEST_CASE("Beurling consistency on random 5x5 elements") {
  Rng rng(33);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    CMat a = rng.matrix(5);
    a /= op_norm(a);
    const RadiusTrace tr = spectral_radius_limit(full(a), 1 << 10);
    CHECK(std::abs(tr.eigen_radius - eigen_radius(a)) < 1e-9);
    worst = std::max(worst, tr.gap);
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("powers vanish exactly when the radius is below one") {
  Rng rng(34);
  for (int t = 0; t < 40; ++t) {
    CMat a = rng.matrix(4);
    const double target = t % 2 == 0 ? 0.8 : 1.25;
    a *= target / eigen_radius(a);
    // ||a^n|| = (||a^n||^(1/n))^n
    const double root = power_norm_root(a, 2048);
    const double log_norm = 2048.0 * std::log(root);
    if (target < 1.0) {
      CHECK(log_norm < std::log(1e-6));
    } else {
      CHECK(log_norm > std::log(1e6));
    }
  }
}

TEST_CASE("neumann_inverse") {
  const auto m2 = Algebra::full(2);
  CHECK(max_abs_diff(neumann_inverse(Element(m2, CMat::Zero(2, 2))).matrix(), identity(2)) < 1e-15);
  CHECK(max_abs_diff(neumann_inverse(Element(m2, CMat(0.5 * identity(2)))).matrix(),
                     2.0 * identity(2)) < 1e-11);
  Rng rng(35);
  for (int t = 0; t < 20; ++t) {
    CMat a = rng.matrix(4);
    a *= 0.3 / op_norm(a);
    const CMat s = neumann_inverse(full(a)).matrix();
    CHECK(op_norm(CMat(s - invert(identity(4) - a))) <= 1e-10);
  }
  CHECK(code_of([] { neumann_inverse(full(mat({{1, 0}, {0, 0}}))); }) ==
        ErrorCode::NotContractive);
}

TEST_CASE("exp_element examples") {
  const double e = std::numbers::e;
  const CMat ex = exp_element(full(mat({{1, 5}, {0, 2}}))).matrix();
  CHECK(max_abs_diff(ex, mat({{e, 5 * (e * e - e)}, {0, e * e}})) < 1e-10);
  CHECK(max_abs_diff(exp_element(full(CMat::Zero(3, 3))).matrix(), identity(3)) < 1e-15);

  const CMat a = mat({{1, 0}, {0, 0}});
  const CMat b = mat({{0, 1}, {0, 0}});
  const CMat eab = exp_element(full(CMat(a + b))).matrix();
  const CMat product = exp_element(full(a)).matrix() * exp_element(full(b)).matrix();
  CHECK(max_abs_diff(eab, mat({{e, e - 1}, {0, 1}})) < 1e-12);
  CHECK(max_abs_diff(product, mat({{e, e}, {0, 1}})) < 1e-12);

  const double pi = std::numbers::pi;
  const CMat u = exp_element(full(CMat(Complex(0, 1) * mat({{0, pi}, {pi, 0}})))).matrix();
  CHECK(max_abs_diff(u, -identity(2)) < 1e-10);
}

TEST_CASE("exp_element against the plain series and its own inverse") {
  Rng rng(36);
  for (int t = 0; t < 30; ++t) {
    const CMat a = rng.matrix(4);
    const CMat ea = exp_element(full(a)).matrix();
    const CMat series = series_exp(a, 80);
    CHECK(op_norm(CMat(ea - series)) <= 1e-10 * std::max(1.0, op_norm(series)));
    CHECK(op_norm(ea) <= std::exp(op_norm(a)) + 1e-9);
    const CMat eneg = exp_element(full(CMat(-a))).matrix();
    CHECK(op_norm(CMat(ea * eneg - identity(4))) < 1e-9 * op_norm(ea) * op_norm(eneg));
    // exp(a*) = exp(a)*
    CHECK(op_norm(CMat(exp_element(full(adjoint(a))).matrix() - ea.adjoint())) <
          1e-10 * std::max(1.0, op_norm(ea)));
  }
}

TEST_CASE("exp(ia) is unitary for Hermitian a and has spectrum on the circle") {
  Rng rng(37);
  for (int t = 0; t < 30; ++t) {
    const CMat h = rng.hermitian(4);
    const Element u = exp_element(full(CMat(Complex(0, 1) * h)));
    CHECK(classify(u).unitary);
    for (const Complex& z : spectrum(u).points) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-8);
  }
  for (int t = 0; t < 20; ++t) {
    const CMat w = rng.unitary(5);
    for (const Complex& z : spectrum(full(w)).points) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-8);
  }
}

TEST_CASE("exp(a+b) = exp(a)exp(b) for commuting pairs") {
  Rng rng(38);
  for (int t = 0; t < 20; ++t) {
    const CMat a = rng.matrix(3);
    const CMat b = 0.5 * a * a - 2.0 * a + 3.0 * identity(3);
    REQUIRE(op_norm(CMat(a * b - b * a)) <= 1e-9 * std::max(1.0, op_norm(a) * op_norm(b)));
    const CMat lhs = exp_element(full(CMat(a + b))).matrix();
    const CMat rhs = exp_element(full(a)).matrix() * exp_element(full(b)).matrix();
    CHECK(op_norm(CMat(lhs - rhs)) <= 1e-9 * std::max(1.0, op_norm(lhs)));
  }
}

TEST_CASE("poly_apply and spectral mapping") {
  const CMat a = mat({{3, 2}, {1, 4}});
  const std::vector<Complex> p{5, 8, 10, 1};
  const Element pa = poly_apply(full(a), p);
  CHECK(max_abs_diff(pa.matrix(), mat({{186, 234}, {117, 303}})) < 1e-8);
  CHECK(set_distance(spectrum(pa).points, {69.0, 420.0}) < 1e-6);

  const Element c = poly_apply(full(a), {Complex(2, 1)});
  CHECK(max_abs_diff(c.matrix(), Complex(2, 1) * identity(2)) < 1e-15);
  CHECK(set_distance(spectrum(c).points, {Complex(2, 1)}) < 1e-12);

  Rng rng(39);
  for (int t = 0; t < 20; ++t) {
    const CMat n = rng.normal_matrix(4);
    std::vector<Complex> coeffs{rng.cnormal(), rng.cnormal(), rng.cnormal(), rng.cnormal()};
    const CMat pn = poly_apply(full(n), coeffs).matrix();
    std::vector<Complex> mapped;
    for (const Complex& z : eigen_eigenvalues(n)) {
      mapped.push_back(coeffs[0] + z * (coeffs[1] + z * (coeffs[2] + z * coeffs[3])));
    }
    CHECK(multiset_distance(eigen_eigenvalues(pn), mapped) <= 1e-8 * std::max(1.0, op_norm(pn)));
  }
}

TEST_CASE("classify") {
  const double pi = std::numbers::pi;
  const Classification h = classify(full(mat({{0, pi}, {pi, 0}})));
  CHECK(h.hermitian);
  CHECK(h.normal);
  CHECK_FALSE(h.positive);
  const Classification u = classify(full(CMat(-identity(2))));
  CHECK(u.unitary);
  const Classification n = classify(full(unit_matrix(2, 0, 1)));
  CHECK_FALSE(n.hermitian);
  CHECK_FALSE(n.unitary);
  CHECK_FALSE(n.normal);
  CHECK_FALSE(n.positive);
  CHECK(classify(full(mat({{25, 40}, {40, 65}}))).positive);
}

TEST_CASE("spectra of Hermitian, positive and normal elements") {
  Rng rng(40);
  for (int t = 0; t < 30; ++t) {
    const CMat h = rng.hermitian(5);
    for (const Complex& z : spectrum(full(h)).points) CHECK(std::abs(z.imag()) <= 1e-8);
    const CMat c = rng.matrix(5);
    const CMat cc = c.adjoint() * c;
    for (const Complex& z : spectrum(full(cc)).points) {
      CHECK(z.real() >= -1e-8);
      CHECK(std::abs(z.imag()) <= 1e-8);
    }
    CHECK(classify(full(cc)).positive);
    const CMat n = rng.normal_matrix(5);
    CHECK(classify(full(n)).normal);
    CHECK(std::abs(spectrum(full(n)).radius - op_norm(n)) <= 1e-8 * std::max(1.0, op_norm(n)));
  }
}

TEST_CASE("sqrt_positive") {
  CHECK(max_abs_diff(sqrt_positive(full(mat({{25, 40}, {40, 65}}))).matrix(),
                     mat({{3, 4}, {4, 7}})) < 1e-8);
  CHECK(max_abs_diff(sqrt_positive(full(identity(3))).matrix(), identity(3)) < 1e-14);
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const CMat a = rng.psd(4);
    const Element s = sqrt_positive(full(a));
    CHECK(op_norm(CMat(s.matrix() * s.matrix() - a)) <= 1e-8 * op_norm(a));
    CHECK(classify(s).hermitian);
    for (const Complex& z : spectrum(s).points) CHECK(z.real() >= -1e-8);
  }
  CHECK(code_of([] { sqrt_positive(full(mat({{1, 0}, {0, -1}}))); }) == ErrorCode::NotPositive);
}

TEST_CASE("func_calc cross-checks") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const CMat n = rng.normal_matrix(4);
    CHECK(op_norm(CMat(func_calc(full(n), [](Complex z) { return z; }).matrix() - n)) < 1e-9 * op_norm(n));
    const std::vector<Complex> coeffs{1.0, -2.0, Complex(0, 1)};
    const CMat via_poly = poly_apply(full(n), coeffs).matrix();
    const CMat via_fc =
        func_calc(full(n), [&](Complex z) { return coeffs[0] + z * (coeffs[1] + z * coeffs[2]); }).matrix();
    CHECK(op_norm(CMat(via_poly - via_fc)) < 1e-9 * std::max(1.0, op_norm(via_poly)));

    const CMat h = rng.hermitian(4);
    const CMat ef = func_calc(full(h), [](Complex z) { return std::exp(z); }).matrix();
    CHECK(op_norm(CMat(ef - exp_element(full(h)).matrix())) <= 1e-9 * std::max(1.0, op_norm(ef)));

    const CMat p = rng.psd(4);
    const CMat sf = func_calc(full(p), [](Complex z) { return std::sqrt(std::max(0.0, z.real())); }).matrix();
    CHECK(op_norm(CMat(sf - sqrt_positive(full(p)).matrix())) <= 1e-9 * std::max(1.0, op_norm(sf)));
  }
  CHECK(code_of([] { func_calc(full(unit_matrix(2, 0, 1)), [](Complex z) { return z; }); }) ==
        ErrorCode::NotNormal);
}

TEST_CASE("commutator_scalar_test") {
  const CMat a = mat({{1, 0}, {0, 2}});
  const CommutatorReport comm = commutator_scalar_test(full(a), full(CMat(a * a)));
  CHECK(comm.scalar_residual == 0.0);
  CHECK(std::abs(comm.lambda_candidate) == 0.0);
  CHECK(comm.scalar);

  Rng rng(43);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CommutatorReport r = commutator_scalar_test(full(rng.matrix(3)), full(rng.matrix(3)));
    worst = std::max(worst, std::abs(r.trace_value));
    if (r.scalar) CHECK(std::abs(r.lambda_candidate) < 1e-9);
  }
  CHECK(worst <= 1e-12);

  const qm::BoxGrid g(1.0, 40);
  const Element x = qm::position_operator(g);
  const Element p = qm::momentum_operator(g, true);
  const CommutatorReport ccr = commutator_scalar_test(x, p);
  CHECK_FALSE(ccr.scalar);
  CHECK(ccr.scalar_residual > 1.0);
  CHECK(std::abs(ccr.trace_value) < 1e-9);
}

TEST_CASE("spec_symmetry_check") {
  const CMat e12 = unit_matrix(2, 0, 1);
  const CMat e21 = unit_matrix(2, 1, 0);
  CHECK(spec_symmetry_check(full(e12), full(e21)) < 1e-12);
  const CMat d = mat({{1, 0}, {0, 3}});
  CHECK(spec_symmetry_check(full(d), full(CMat(d * d))) < 1e-12);
  Rng rng(44);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    worst = std::max(worst, spec_symmetry_check(full(rng.matrix(4)), full(rng.matrix(4))));
  }
  CHECK(worst <= 1e-7);
  // singular factors: rectangular-like embedding in M3
  CMat a = CMat::Zero(3, 3);
  CMat b = CMat::Zero(3, 3);
  a.topRows(2) = rng.matrix(2, 3);
  b.leftCols(2) = rng.matrix(3, 2);
  CHECK(spec_symmetry_check(full(a), full(b)) <= 1e-7);
}

TEST_CASE("hausdorff and dedupe helpers") {
  CHECK(hausdorff_distance({1.0, 2.0}, {2.0, 1.0}) == 0.0);
  CHECK(hausdorff_distance({}, {0.0}) == 0.0);
  CHECK(hausdorff_distance({1.0}, {1.5}) == doctest::Approx(0.5));
  CHECK(dedupe({1.0, 1.0 + 1e-12, 2.0}, 1e-7).size() == 2);
}
