#include "sz/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sz/envelope.hpp"
#include "sz/functionals.hpp"
#include "sz/glue.hpp"
#include "sz/hull.hpp"
#include "sz/io.hpp"
#include "sz/oracle.hpp"
#include "sz/verify.hpp"

namespace sz::cli {
namespace {

using nlohmann::json;

// "x,y" per coordinate, coordinates separated by ';' (one coordinate for
// planar targets): "2,0" or "1,0;0.5,-1".
Eigen::VectorXcd parse_point(const std::string& text) {
  std::vector<cplx> coords;
  std::istringstream stream(text);
  std::string coord;
  while (std::getline(stream, coord, ';')) {
    double re = 0.0, im = 0.0;
    char tail = '\0';
    if (std::sscanf(coord.c_str(), "%lf,%lf%c", &re, &im, &tail) != 2)
      throw std::invalid_argument("--point: expected \"re,im\" per coordinate, got \"" +
                                  coord + "\"");
    coords.emplace_back(re, im);
  }
  if (coords.empty())
    throw std::invalid_argument("--point: expected at least one coordinate");
  Eigen::VectorXcd p(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    p[static_cast<Eigen::Index>(i)] = coords[i];
  return p;
}

// "ball,rational,glued" (any nonempty subset).
FamilySelection parse_families(const std::string& text, int budget,
                               unsigned long long seed) {
  FamilySelection sel;
  sel.ball = sel.rational = sel.glued = false;
  std::istringstream stream(text);
  std::string name;
  while (std::getline(stream, name, ',')) {
    if (name == "ball")
      sel.ball = true;
    else if (name == "rational")
      sel.rational = true;
    else if (name == "glued")
      sel.glued = true;
    else
      throw std::invalid_argument("--families: unknown family \"" + name +
                                  "\" (want ball, rational, glued)");
  }
  if (!sel.ball && !sel.rational && !sel.glued)
    throw std::invalid_argument("--families: expected at least one family");
  if (budget > 0) {
    sel.rational_opts.restarts = budget;
    sel.glued_opts.restarts = budget;
  }
  sel.rational_opts.seed = seed;
  sel.glued_opts.seed = seed;
  return sel;
}

// "re0:re1:n,im0:im1:n" (the imaginary axis may be omitted for a real slice).
GridSpec parse_grid_spec(const std::string& text) {
  GridSpec gs;
  std::istringstream stream(text);
  std::string axis;
  int parsed = 0;
  while (std::getline(stream, axis, ',')) {
    double a = 0.0, b = 0.0;
    int n = 0;
    char tail = '\0';
    if (std::sscanf(axis.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3)
      throw std::invalid_argument("--grid: expected \"lo:hi:count\" per axis, got \"" +
                                  axis + "\"");
    if (parsed == 0) {
      gs.re0 = a;
      gs.re1 = b;
      gs.nre = n;
    } else if (parsed == 1) {
      gs.im0 = a;
      gs.im1 = b;
      gs.nim = n;
    } else {
      throw std::invalid_argument("--grid: expected at most two axes");
    }
    ++parsed;
  }
  if (parsed == 0) throw std::invalid_argument("--grid: expected at least one axis");
  return gs;
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::istringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("--schedule: expected a comma list of radii, got \"" +
                                  item + "\"");
    }
  }
  return out;
}

void require_run_grid(int n) {
  if (n < (1 << 10) || (n & (n - 1)) != 0)
    throw std::invalid_argument("--grid: must be a power of two >= 1024");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + out_path);
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- subcommand bodies -------------------------------------------------------

int run_functional(const std::string& disc_path, const std::string& which,
                   const std::string& method, int grid,
                   const std::string& out_path) {
  FactoredDisc d = io::read_disc(disc_path);
  FunctionalValue v;
  if (which == "J") {
    if (method != "exact")
      throw std::invalid_argument("--method: J is exact-only");
    v = J_of(lift(d));
  } else if (which == "I") {
    if (method == "quadrature") require_run_grid(grid);
    v = method == "exact" ? I_of(lift(d)) : I_of_quadrature(lift(d), grid);
  } else {  // nu
    if (method != "exact")
      throw std::invalid_argument("--method: nu is exact-only");
    v = nu_of(d);
  }
  json j = {{"schema", "sz/1"},
            {"which", which},
            {"method", method},
            {"infinite", v.infinite},
            {"value", v.infinite ? json(nullptr) : json(v.value)}};
  if (method == "quadrature") j["grid"] = grid;
  if (v.method == FunctionalMethod::exact)
    j["detail"] = {{"blaschke_part", v.detail.blaschke_part},
                   {"singular_part", v.detail.singular_part},
                   {"removed_blaschke", v.detail.removed_blaschke},
                   {"removed_singular", v.detail.removed_singular}};
  emit(dump(j), out_path);
  return 0;
}

int run_glue(const std::string& spec_path, const std::string& set_path,
             int grid, const std::string& out_path) {
  require_run_grid(grid);
  GluingSpec spec = io::read_gluing(spec_path);
  SetGeometry X = io::read_geometry(set_path);
  GluingBoundReport rep = gluing_upper_bound(spec, X, grid);
  json j = {{"schema", "sz/1"},
            {"bound", finite_or_null(rep.bound)},
            {"sum_attached_j", finite_or_null(rep.sum_attached_j)},
            {"fraction_inside", rep.fraction_inside},
            {"worst_margin", finite_or_null(rep.worst_margin)},
            {"max_attached_distance", rep.max_attached_distance},
            {"skipped_fraction", rep.skipped_fraction},
            {"grid", rep.grid},
            {"valid", rep.valid}};
  emit(dump(j), out_path);
  return 0;
}

int run_envelope(const std::string& set_path, const std::string& point,
                 const std::string& families, int budget,
                 unsigned long long seed, const std::string& out_path) {
  SetGeometry X = io::read_geometry(set_path);
  Eigen::VectorXcd z = parse_point(point);
  FamilySelection sel = parse_families(families, budget, seed);
  EnvelopeResult r = envelope_best(X, z, sel);
  emit(io::envelope_to_string(r), out_path);
  return r.has_certificate ? 0 : 1;
}

int run_envelope_grid(const std::string& set_path, const std::string& grid,
                      const std::string& families, int budget,
                      unsigned long long seed, const std::string& out_path) {
  SetGeometry X = io::read_geometry(set_path);
  GridSpec gs = parse_grid_spec(grid);
  FamilySelection sel = parse_families(families, budget, seed);
  emit(io::grid_csv(v_grid(X, gs, sel)), out_path);
  return 0;
}

int run_oracle(const std::string& set_path, const std::string& point,
               const std::string& method, int grid, double outer_radius,
               int degree, int samples, unsigned seed,
               const std::string& out_path) {
  SetGeometry X = io::read_geometry(set_path);
  Eigen::VectorXcd z = parse_point(point);
  json j = {{"schema", "sz/1"}};
  if (method == "closed") {
    OracleValue o = closed_form(X, z);
    j["oracle"] = "closed_form";
    j["value"] = o.value;
    j["error_estimate"] = o.error_estimate;
  } else if (method == "pde") {
    if (z.size() != 1)
      throw std::invalid_argument("--point: the PDE oracle is planar");
    PdeOptions opts;
    opts.grid = grid;
    opts.outer_radius = outer_radius;
    PdeResult r = pde_green(X, z[0], opts);
    j["oracle"] = "pde";
    j["value"] = r.oracle.value;
    j["error_estimate"] = r.oracle.error_estimate;
    j["converged"] = r.converged;
    j["value_fine"] = r.value_fine;
    j["value_coarse"] = r.value_coarse;
    j["value_far"] = r.value_far;
    j["truncation_term"] = r.truncation_term;
    j["discretization_term"] = r.discretization_term;
  } else {  // poly
    if (z.size() != 1)
      throw std::invalid_argument("--point: the polynomial oracle is planar");
    PolyLowerOptions opts;
    opts.seed = seed;
    PolyLowerResult r =
        poly_lower(boundary_cloud(X, samples), z[0], degree, opts);
    j["oracle"] = "poly_lower";
    j["value"] = finite_or_null(r.oracle.value);
    j["error_estimate"] = r.oracle.error_estimate;
    j["separation"] = r.separation;
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < r.coefficients.size(); ++i)
      coeffs.push_back(json::array(
          {r.coefficients[i].real(), r.coefficients[i].imag()}));
    j["coefficients"] = std::move(coeffs);
  }
  emit(dump(j), out_path);
  return 0;
}

int run_hull(const std::string& compact_path, const std::string& point,
             double eps, const std::string& schedule,
             const std::string& families, int budget, unsigned long long seed,
             int degree, const std::string& out_path) {
  SetGeometry K = io::read_geometry(compact_path);
  Eigen::VectorXcd a = parse_point(point);
  HullOptions opts;
  opts.eps = eps;
  opts.schedule = parse_schedule(schedule);
  opts.families = parse_families(families, budget, seed);
  opts.poly_degree = degree;
  HullVerdict v = hull_test(K, a, opts);
  emit(io::verdict_to_string(v), out_path);
  return 0;
}

int run_verify(const std::string& suite) {
  verify::SuiteResult r = verify::run_all(suite);
  verify::print_table(r, std::cout);
  return r.all_pass ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"szlab: disc-functional bounds for extremal plurisubharmonic "
               "functions on unions of balls and boxes"};
  app.require_subcommand(1);

  // functional
  auto* fc = app.add_subcommand(
      "functional", "Evaluate J, I, or nu on a factored-disc file");
  std::string fc_disc, fc_which, fc_method = "exact", fc_out;
  int fc_grid = 1 << 16;
  fc->add_option("--disc", fc_disc, "factored-disc JSON file")->required();
  fc->add_option("--which", fc_which, "functional to evaluate")
      ->required()
      ->check(CLI::IsMember({"J", "I", "nu"}));
  fc->add_option("--method", fc_method, "exact or quadrature (I only)")
      ->check(CLI::IsMember({"exact", "quadrature"}));
  fc->add_option("--grid", fc_grid, "quadrature grid size (power of two)");
  fc->add_option("--out", fc_out, "output JSON path (default stdout)");

  // glue
  auto* gl = app.add_subcommand(
      "glue", "Boundary upper bound of a stitched-disc spec against a target");
  std::string gl_spec, gl_set, gl_out;
  int gl_grid = 1 << 16;
  gl->add_option("--spec", gl_spec, "gluing-spec JSON file")->required();
  gl->add_option("--set", gl_set, "target geometry JSON file")->required();
  gl->add_option("--grid", gl_grid, "boundary grid size (power of two)");
  gl->add_option("--out", gl_out, "output JSON path (default stdout)");

  // envelope
  auto* en = app.add_subcommand(
      "envelope", "Certified upper bound of the extremal function at a point");
  std::string en_set, en_point, en_families = "ball", en_out;
  int en_budget = 0;
  unsigned long long en_seed = 2026;
  en->add_option("--set", en_set, "target geometry JSON file")->required();
  en->add_option("--point", en_point, "query point \"re,im[;re,im...]\"")
      ->required();
  en->add_option("--families", en_families,
                 "comma list from ball, rational, glued");
  en->add_option("--budget", en_budget, "optimizer restarts (0 = defaults)");
  en->add_option("--seed", en_seed, "search seed");
  en->add_option("--out", en_out, "output JSON path (default stdout)");

  // envelope-grid
  auto* eg = app.add_subcommand(
      "envelope-grid", "Envelope values on a planar rectangular grid (CSV)");
  std::string eg_set, eg_grid, eg_families = "ball", eg_out;
  int eg_budget = 0;
  unsigned long long eg_seed = 2026;
  eg->add_option("--set", eg_set, "target geometry JSON file")->required();
  eg->add_option("--grid", eg_grid, "axes \"re0:re1:n[,im0:im1:n]\"")
      ->required();
  eg->add_option("--families", eg_families,
                 "comma list from ball, rational, glued");
  eg->add_option("--budget", eg_budget, "optimizer restarts (0 = defaults)");
  eg->add_option("--seed", eg_seed, "search seed");
  eg->add_option("--out", eg_out, "output CSV path (default stdout)");

  // oracle
  auto* oc = app.add_subcommand(
      "oracle", "Independent reference value at a point");
  std::string oc_set, oc_point, oc_method, oc_out;
  int oc_grid = 2000, oc_degree = 6, oc_samples = 1 << 10;
  double oc_R = 0.0;
  unsigned oc_seed = 2026;
  oc->add_option("--set", oc_set, "target geometry JSON file")->required();
  oc->add_option("--point", oc_point, "query point \"re,im[;re,im...]\"")
      ->required();
  oc->add_option("--method", oc_method, "pde, poly, or closed")
      ->required()
      ->check(CLI::IsMember({"pde", "poly", "closed"}));
  oc->add_option("--grid", oc_grid, "PDE fine-grid intervals per side");
  oc->add_option("--R", oc_R, "PDE outer radius (0 = automatic)");
  oc->add_option("--degree", oc_degree, "polynomial oracle degree");
  oc->add_option("--samples", oc_samples,
                 "boundary samples per primitive (poly oracle)");
  oc->add_option("--seed", oc_seed, "polynomial search seed");
  oc->add_option("--out", oc_out, "output JSON path (default stdout)");

  // hull
  auto* hl = app.add_subcommand(
      "hull", "Polynomial-hull membership test for a planar compact");
  std::string hl_compact, hl_point, hl_schedule, hl_families = "ball", hl_out;
  double hl_eps = 0.05;
  int hl_budget = 0, hl_degree = 6;
  unsigned long long hl_seed = 2026;
  hl->add_option("--compact", hl_compact, "compact geometry JSON file")
      ->required();
  hl->add_option("--point", hl_point, "query point \"re,im[;re,im...]\"")
      ->required();
  hl->add_option("--eps", hl_eps, "membership threshold on the disc value");
  hl->add_option("--schedule", hl_schedule,
                 "comma list of neighbourhood radii (default relative)");
  hl->add_option("--families", hl_families,
                 "comma list from ball, rational, glued");
  hl->add_option("--budget", hl_budget, "optimizer restarts (0 = defaults)");
  hl->add_option("--seed", hl_seed, "search seed");
  hl->add_option("--degree", hl_degree, "separating-polynomial degree");
  hl->add_option("--out", hl_out, "output JSON path (default stdout)");

  // verify
  auto* vf = app.add_subcommand(
      "verify", "Run the acceptance battery and print a pass/fail table");
  std::string vf_suite = "paper-fixtures";
  vf->add_option("--suite", vf_suite, "check suite name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fc->parsed())
      return run_functional(fc_disc, fc_which, fc_method, fc_grid, fc_out);
    if (gl->parsed()) return run_glue(gl_spec, gl_set, gl_grid, gl_out);
    if (en->parsed())
      return run_envelope(en_set, en_point, en_families, en_budget, en_seed,
                          en_out);
    if (eg->parsed())
      return run_envelope_grid(eg_set, eg_grid, eg_families, eg_budget,
                               eg_seed, eg_out);
    if (oc->parsed())
      return run_oracle(oc_set, oc_point, oc_method, oc_grid, oc_R, oc_degree,
                        oc_samples, oc_seed, oc_out);
    if (hl->parsed())
      return run_hull(hl_compact, hl_point, hl_eps, hl_schedule, hl_families,
                      hl_budget, hl_seed, hl_degree, hl_out);
    if (vf->parsed()) return run_verify(vf_suite);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sz::cli
