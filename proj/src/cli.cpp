#include "cstar/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "cstar/gelfand.hpp"
#include "cstar/io.hpp"
#include "cstar/qm.hpp"
#include "cstar/spectral.hpp"
#include "cstar/states.hpp"

namespace cstar::cli {

namespace {

using io::Json;

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string field = "complex";
  std::optional<double> tol;
  std::uint64_t seed = 0;
  long grid = 2000;
  int levels = 5;
  double length = 1.0;
  long n_max = 1024;
};

struct Report {
  Json results = Json::object();
  Json residuals = Json::object();

  void residual(const std::string& name, double value, double tol,
                const char* bound = "upper") {
    residuals[name] = Json{{"value", value}, {"tol", tol}, {"bound", bound}};
  }
};

[[noreturn]] void usage(const std::string& what) {
  throw Error(ErrorCode::MalformedInput, what);
}

CMat input(const Options& o, std::size_t i) {
  if (o.inputs.size() <= i) usage("missing --input #" + std::to_string(i + 1));
  return io::parse_matrix(o.inputs[i]);
}

CMat square_input(const Options& o, std::size_t i) {
  CMat m = input(o, i);
  if (m.rows() != m.cols()) usage("--input " + o.inputs[i] + " must be square");
  return m;
}

std::vector<CMat> square_inputs(const Options& o, std::size_t from) {
  std::vector<CMat> out;
  for (std::size_t i = from; i < o.inputs.size(); ++i) out.push_back(square_input(o, i));
  return out;
}

Field field_of(const Options& o) {
  return o.field == "real" ? Field::Real : Field::Complex;
}

Json complex_list(const std::vector<Complex>& zs) {
  Json out = Json::array();
  for (const Complex& z : zs) out.push_back(io::complex_to_json(z));
  return out;
}

Json complex_list(const CVec& zs) {
  return complex_list(std::vector<Complex>(zs.data(), zs.data() + zs.size()));
}

// Algebra generated (with unit) by the given matrices, or M_n when empty.
AlgebraPtr algebra_of(const std::vector<CMat>& gens, Eigen::Index n, Field field) {
  if (gens.empty()) return Algebra::full(n, field);
  return algebra_from_generators(gens, true, Closure::Star, field);
}

void cmd_spectrum(const Options& o, Report& r) {
  const CMat a = square_input(o, 0);
  const auto alg = Algebra::full(a.rows());
  const SpectrumReport s = spectrum(Element(alg, a), o.field == "real" ? FieldMode::Real
                                                                       : FieldMode::Complex);
  bool all_real = true;
  for (const Complex& z : s.points) all_real = all_real && z.imag() == 0.0;
  const double cluster = clustering_radius(s.radius);
  Json points = Json::array();
  for (const Complex& z : s.points) {
    if (std::abs(z.imag()) <= cluster) {
      points.push_back(z.real());
    } else {
      points.push_back(io::complex_to_json(z));
    }
  }
  r.results["points"] = std::move(points);
  r.results["points_complex"] = complex_list(s.points);
  r.results["radius"] = s.radius;
  r.results["field"] = o.field;
  double worst = 0.0;
  const double scale = std::max(1.0, op_norm(a));
  for (const Complex& z : s.points) {
    const CMat shifted = a - z * identity(a.rows());
    worst = std::max(worst, smallest_singular_value(shifted) / scale);
  }
  r.residual("eigen_singular_value", worst, 1e-6);
}

void cmd_radius(const Options& o, Report& r) {
  const CMat a = square_input(o, 0);
  const RadiusTrace t = spectral_radius_limit(Element(Algebra::full(a.rows()), a), o.n_max);
  Json terms = Json::array();
  for (const auto& [n, v] : t.terms) terms.push_back(Json::array({n, v}));
  r.results["terms"] = std::move(terms);
  r.results["estimate"] = t.estimate;
  r.results["eigen_radius"] = t.eigen_radius;
  r.results["n_max"] = o.n_max;
  r.residual("radius_gap", t.gap, 1e-3);
}

void cmd_exp(const Options& o, Report& r) {
  const CMat a = square_input(o, 0);
  const auto alg = Algebra::full(a.rows());
  const CMat e = exp_element(Element(alg, a)).matrix();
  const CMat e_neg = exp_element(Element(alg, CMat(-a))).matrix();
  r.results["matrix"] = io::matrix_to_json(e);
  r.residual("inverse_residual", frob(CMat(e * e_neg - identity(a.rows()))),
             o.tol.value_or(1e-9) * std::max(1.0, op_norm(e) * op_norm(e_neg)));
  r.residual("norm_bound_excess", op_norm(e) - std::exp(op_norm(a)), 1e-9);
}

void cmd_sqrt(const Options& o, Report& r) {
  const CMat a = square_input(o, 0);
  const CMat s = sqrt_positive(Element(Algebra::full(a.rows()), a)).matrix();
  r.results["matrix"] = io::matrix_to_json(s);
  r.residual("square_residual", frob(CMat(s * s - a)) / std::max(1.0, frob(a)), 1e-8);
}

void cmd_neumann(const Options& o, Report& r) {
  const CMat a = square_input(o, 0);
  const double tol = o.tol.value_or(1e-12);
  const CMat s = neumann_inverse(Element(Algebra::full(a.rows()), a), tol).matrix();
  r.results["matrix"] = io::matrix_to_json(s);
  r.results["norm"] = op_norm(a);
  r.residual("inverse_mismatch", frob(CMat(s - invert(identity(a.rows()) - a))), 10 * tol);
}

void cmd_characters(const Options& o, Report& r) {
  const std::vector<CMat> gens = square_inputs(o, 0);
  if (gens.empty()) usage("characters needs at least one --input generator");
  const auto alg = algebra_of(gens, gens.front().rows(), Field::Complex);
  const GelfandSpectrumData spec = characters(alg, o.seed);
  Json chars = Json::array();
  double defect = 0.0;
  for (const Character& chi : spec.characters) {
    std::vector<Complex> on_gens;
    for (const CMat& g : gens) on_gens.push_back(chi(g));
    chars.push_back(complex_list(on_gens));
    defect = std::max(defect, chi.multiplicativity_defect());
  }
  r.results["algebra_dim"] = alg->dim();
  r.results["count"] = spec.characters.size();
  r.results["values_on_generators"] = std::move(chars);
  r.residual("multiplicativity_defect", defect, 1e-8);
}

void cmd_gelfand(const Options& o, Report& r) {
  const std::vector<CMat> gens = square_inputs(o, 0);
  if (gens.empty()) usage("gelfand needs --input");
  const auto alg = algebra_of(gens, gens.front().rows(), Field::Complex);
  const GelfandSpectrumData spec = characters(alg, o.seed);
  const CVec hat = gelfand_transform(Element(alg, gens.front()), spec);
  const IsometryReport iso = gelfand_isometry_report(alg, 100, o.seed);
  r.results["transform"] = complex_list(hat);
  r.results["sup"] = hat.size() ? hat.cwiseAbs().maxCoeff() : 0.0;
  r.results["spectral_radius"] = spectrum(Element(alg, gens.front())).radius;
  r.results["norm"] = op_norm(gens.front());
  r.results["star_closed"] = iso.star_closed;
  r.results["transform_kernel_dim"] = iso.transform_kernel.size();
  r.residual("sup_minus_radius", iso.max_radius_residual, 1e-8);
  r.residual("sup_minus_norm", iso.max_norm_residual, 1e-8);
}

void cmd_gkz(const Options& o, Report& r) {
  const CMat d = square_input(o, 0);
  const auto alg = Algebra::full(d.rows());
  // phi(a) = sum_ij D_ij a_ij
  const Functional phi = Functional::from_density(alg, d.transpose());
  const GkzResult res = gkz_witness(phi, o.seed);
  if (std::holds_alternative<CharacterVerdict>(res)) {
    r.results["verdict"] = "character";
    return;
  }
  const GkzWitness& w = std::get<GkzWitness>(res);
  r.results["verdict"] = "witness";
  r.results["witness"] = io::matrix_to_json(w.witness.matrix());
  r.results["attempts"] = w.attempts_used;
  r.residual("functional_value", std::abs(w.functional_value), 1e-9);
  r.residual("smallest_singular_value", w.smallest_singular_value, 1e-8, "lower");
}

void cmd_gns(const Options& o, Report& r) {
  const CMat x = input(o, 0);
  if (x.cols() != 1) usage("gns expects a column vector (cols = 1) as first --input");
  const auto alg = algebra_of(square_inputs(o, 1), x.rows(), Field::Complex);
  const State f = vector_state(alg, x.col(0));
  const GnsRepresentation g = gns(f);
  r.results["algebra_dim"] = alg->dim();
  r.results["hilbert_dim"] = g.hilbert_dim;

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal;
  auto sample = [&] {
    CVec c(static_cast<Eigen::Index>(alg->dim()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(normal(rng), normal(rng));
    return alg->from_coords(c);
  };
  double hom = 0.0;
  double star = 0.0;
  double contraction = 0.0;
  for (int s = 0; s < 100; ++s) {
    const CMat a = sample();
    const CMat b = sample();
    hom = std::max(hom, op_norm(CMat(g.rep(CMat(a * b)) - g.rep(a) * g.rep(b))));
    star = std::max(star, op_norm(CMat(g.rep(CMat(a.adjoint())) - g.rep(a).adjoint())));
    contraction = std::max(contraction, op_norm(g.rep(a)) - op_norm(a));
  }
  double cyclic = 0.0;
  if (g.cyclic_vector) {
    for (int s = 0; s < 20; ++s) {
      const CMat a = sample();
      const Complex lhs = g.cyclic_vector->dot(g.rep(a) * *g.cyclic_vector);
      cyclic = std::max(cyclic, std::abs(lhs - f(a)));
    }
  }
  r.residual("homomorphism", hom, 1e-9);
  r.residual("adjoint", star, 1e-9);
  r.residual("contraction_excess", contraction, 1e-9);
  r.residual("cyclic_expectation", cyclic, 1e-9);
}

void cmd_universal(const Options& o, Report& r) {
  const std::vector<CMat> gens = square_inputs(o, 0);
  if (gens.empty()) usage("universal needs at least one --input generator");
  const auto alg = algebra_of(gens, gens.front().rows(), Field::Complex);
  const UniversalReport u = universal_rep(alg, {}, o.seed);
  r.results["algebra_dim"] = alg->dim();
  r.results["representation_dim"] = u.representation.dim;
  r.results["state_count"] = u.state_count;
  r.residual("isometry", u.max_isometry_residual, 1e-7);
}

void cmd_quotient_norm(const Options& o, Report& r) {
  const std::vector<CMat> mats = square_inputs(o, 0);
  if (mats.size() < 2) usage("quotient-norm needs the element and at least one ideal --input");
  const auto alg = algebra_of(mats, mats.front().rows(), field_of(o));
  const std::vector<CMat> ideal_span(mats.begin() + 1, mats.end());
  const QuotientAlgebra q = quotient(alg, SubspaceBasis(ideal_span, alg->ambient_dim()));
  QuotientNormOptions opts;
  opts.seed = o.seed;
  const double value = quotient_norm(q, Element(alg, mats.front()), opts);
  r.results["quotient_norm"] = value;
  r.results["norm"] = op_norm(mats.front());
  r.results["quotient_dim"] = q.dim();
  r.residual("upper_bound_excess", value - op_norm(mats.front()), 1e-9);
}

void cmd_qm(const Options& o, Report& r) {
  const qm::BoxGrid g(o.length, o.grid);
  const Element x = qm::position_operator(g);
  const Element cosine = qm::cosine_observable(g);
  Json rows = Json::array();
  double pos_err = 0.0;
  double cos_err = 0.0;
  double imag = 0.0;
  for (int n = 1; n <= o.levels; ++n) {
    const qm::GridState psi = qm::box_eigenstate(g, n);
    const Complex ex = qm::expectation(x, psi);
    const Complex ec = qm::expectation(cosine, psi);
    rows.push_back(Json{{"n", n},
                        {"energy", qm::box_energy(g, n)},
                        {"position", ex.real()},
                        {"cosine", ec.real()}});
    pos_err = std::max(pos_err, std::abs(ex.real() - g.length() / 2.0));
    cos_err = std::max(cos_err, std::abs(ec.real() - (n == 1 ? 1.0 : 0.0)));
    imag = std::max({imag, std::abs(ex.imag()), std::abs(ec.imag())});
  }
  r.results["levels"] = std::move(rows);
  r.residual("position_vs_half_length", pos_err, 1e-3);
  r.residual("cosine_vs_closed_form", cos_err, 1e-3);
  r.residual("imaginary_part", imag, 1e-10);
}

Json echo_inputs(const std::string& command, const Options& o, const CLI::App& app) {
  Json in = Json::object();
  in["files"] = o.inputs;
  if (app.count("--field")) in["field"] = o.field;
  if (o.tol) in["tol"] = *o.tol;
  if (command == "qm") {
    in["grid"] = o.grid;
    in["levels"] = o.levels;
    in["length"] = o.length;
  }
  if (command == "radius") in["n_max"] = o.n_max;
  return in;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-dimensional operator algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--input", o.inputs, "matrix JSON file (repeatable)");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--field", o.field, "scalar field")->check(CLI::IsMember({"real", "complex"}));
  app.add_option("--tol", o.tol, "tolerance override");
  app.add_option("--seed", o.seed, "random seed (default 0)");
  app.add_option("--grid", o.grid, "interior grid points for qm");
  app.add_option("--levels", o.levels, "number of box levels for qm");
  app.add_option("--length", o.length, "box length for qm");
  app.add_option("--n-max", o.n_max, "largest power for radius");

  using Handler = std::function<void(const Options&, Report&)>;
  struct Command {
    Handler handler;
    const char* help;
  };
  const std::map<std::string, Command> handlers{
      {"spectrum", {cmd_spectrum, "eigenvalues of one matrix"}},
      {"radius", {cmd_radius, "||a^n||^(1/n) trace against the eigen radius"}},
      {"exp", {cmd_exp, "exponential with inverse and norm-bound checks"}},
      {"sqrt", {cmd_sqrt, "square root of a positive matrix"}},
      {"neumann", {cmd_neumann, "(1 - a)^-1 by the Neumann series, needs ||a|| < 1"}},
      {"gelfand", {cmd_gelfand, "Gelfand transform of the first input"}},
      {"characters", {cmd_characters, "characters of the algebra generated by the inputs"}},
      {"gkz", {cmd_gkz, "character test or invertible witness for phi(a) = sum D_ij a_ij"}},
      {"gns", {cmd_gns, "GNS construction for the vector state of the first input"}},
      {"universal", {cmd_universal, "direct sum of GNS representations over pure states"}},
      {"quotient-norm", {cmd_quotient_norm, "norm of the first input modulo the span of the rest"}},
      {"qm", {cmd_qm, "particle in a box: energies and expectations"}},
  };
  for (const auto& [name, c] : handlers) app.add_subcommand(name, c.help);

  std::vector<std::string> argv_storage{"cstar"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Report r;
    handlers.at(command).handler(o, r);
    Json report;
    report["command"] = command;
    report["inputs"] = echo_inputs(command, o, app);
    report["results"] = std::move(r.results);
    report["residuals"] = std::move(r.residuals);
    report["seed"] = o.seed;
    io::emit_report(report, o.out, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage_like =
        e.code() == ErrorCode::MalformedInput || e.code() == ErrorCode::InvalidArgument;
    return usage_like ? 2 : 1;
  }
}

}  // namespace cstar::cli
