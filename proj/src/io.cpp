#include "sz/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sz::io {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "sz/1";

[[noreturn]] void fail(const std::string& at, const std::string& msg) {
  throw ParseError(at + ": " + msg);
}

std::string join(const std::string& at, const std::string& key) {
  return at.empty() ? key : at + "." + key;
}

std::string index(const std::string& at, std::size_t i) {
  return at + "[" + std::to_string(i) + "]";
}

const json& need(const json& j, const char* key, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(join(at, key), "missing field");
  return *it;
}

double num_at(const json& j, const std::string& at) {
  if (!j.is_number()) fail(at, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(at, "must be finite");
  return v;
}

int int_at(const json& j, const std::string& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer");
  return j.get<int>();
}

const json& array_at(const json& j, const std::string& at,
                     bool allow_empty = false) {
  if (!j.is_array()) fail(at, "expected an array");
  if (!allow_empty && j.empty()) fail(at, "expected a nonempty array");
  return j;
}

cplx cplx_at(const json& j, const std::string& at) {
  if (!j.is_array() || j.size() != 2)
    fail(at, "expected a complex number as [re, im]");
  return {num_at(j[0], index(at, 0)), num_at(j[1], index(at, 1))};
}

Eigen::VectorXcd point_at(const json& j, const std::string& at) {
  array_at(j, at);
  Eigen::VectorXcd p(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = cplx_at(j[i], index(at, i));
  return p;
}

Polynomial poly_at(const json& j, const std::string& at) {
  return Polynomial(point_at(j, at));
}

void check_schema(const json& j, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find("schema");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchema)
    fail(join(at, "schema"), std::string("unsupported schema (want \"") +
                                 kSchema + "\")");
}

// Rewraps constructor validation into a ParseError anchored at `at`.
template <typename F>
auto checked(const std::string& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    fail(at, e.what());
  }
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ParseError(path + ": read failure");
  return ss.str();
}

void spill(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path);
}

template <typename Parse>
auto from_file(const std::string& path, Parse&& parse)
    -> decltype(parse(json{}, std::string{})) {
  json j = parse_text(slurp(path), path);
  try {
    return parse(j, "");
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

json point_json(const Eigen::VectorXcd& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(complex_json(p[i]));
  return a;
}

json poly_json(const Polynomial& p) { return point_json(p.c); }

// --- geometry ---------------------------------------------------------------

SetGeometry parse_geometry(const json& j, const std::string& at) {
  check_schema(j, at);
  double tol = 0.0;
  if (j.contains("tolerance")) tol = num_at(j["tolerance"], join(at, "tolerance"));
  const json& prims = array_at(need(j, "primitives", at), join(at, "primitives"));
  std::vector<Ball> balls;
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const json& p = prims[i];
    std::string pat = index(join(at, "primitives"), i);
    if (!p.is_object()) fail(pat, "expected an object");
    bool has_ball = p.contains("ball"), has_box = p.contains("box");
    if (has_ball == has_box)
      fail(pat, "expected exactly one of \"ball\" or \"box\"");
    if (has_ball) {
      std::string bat = join(pat, "ball");
      Ball b;
      b.center = point_at(need(p["ball"], "center", bat), join(bat, "center"));
      b.radius = num_at(need(p["ball"], "radius", bat), join(bat, "radius"));
      if (b.radius <= 0.0) fail(join(bat, "radius"), "must be positive");
      balls.push_back(std::move(b));
    } else {
      std::string bat = join(pat, "box");
      Box b;
      b.lo = point_at(need(p["box"], "lo", bat), join(bat, "lo"));
      b.hi = point_at(need(p["box"], "hi", bat), join(bat, "hi"));
      boxes.push_back(std::move(b));
    }
  }
  return checked(at.empty() ? "geometry" : at, [&] {
    return SetGeometry::make(std::move(balls), std::move(boxes), tol);
  });
}

json geometry_json(const SetGeometry& X) {
  json prims = json::array();
  for (const Ball& b : X.balls)
    prims.push_back(
        {{"ball", {{"center", point_json(b.center)}, {"radius", b.radius}}}});
  for (const Box& b : X.boxes)
    prims.push_back(
        {{"box", {{"lo", point_json(b.lo)}, {"hi", point_json(b.hi)}}}});
  return {{"schema", kSchema}, {"tolerance", X.tolerance},
          {"primitives", std::move(prims)}};
}

// --- factored disc -----------------------------------------------------------

BlaschkeData parse_blaschke(const json& j, const std::string& at) {
  array_at(j, at, /*allow_empty=*/true);
  std::vector<BlaschkeData::Zero> zeros;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& z = j[i];
    std::string zat = index(at, i);
    if (!z.is_array() || z.size() != 3)
      fail(zat, "expected a zero as [re, im, mult]");
    BlaschkeData::Zero zero;
    zero.a = {num_at(z[0], index(zat, 0)), num_at(z[1], index(zat, 1))};
    zero.mult = int_at(z[2], index(zat, 2));
    zeros.push_back(zero);
  }
  return checked(at, [&] { return BlaschkeData::from(std::move(zeros)); });
}

AtomicMeasure parse_measure(const json& j, const std::string& at) {
  array_at(j, at, /*allow_empty=*/true);
  std::vector<AtomicMeasure::Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& a = j[i];
    std::string aat = index(at, i);
    if (!a.is_array() || a.size() != 2)
      fail(aat, "expected an atom as [angle, mass]");
    atoms.push_back({num_at(a[0], index(aat, 0)), num_at(a[1], index(aat, 1))});
  }
  return checked(at, [&] { return AtomicMeasure::from(std::move(atoms)); });
}

OuterSpec parse_outer(const json& j, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  OuterSpec h = OuterSpec::one();
  bool any = false;
  if (j.contains("rational")) {
    const json& r = j["rational"];
    std::string rat = join(at, "rational");
    Polynomial num = poly_at(need(r, "num", rat), join(rat, "num"));
    Polynomial den = poly_at(need(r, "den", rat), join(rat, "den"));
    h = checked(rat, [&] {
      return OuterSpec::rational(std::move(num), std::move(den));
    });
    any = true;
  }
  if (j.contains("grid")) {
    std::string gat = join(at, "grid");
    const json& g = array_at(j["grid"], gat);
    Eigen::ArrayXd samples(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      samples[i] = num_at(g[i], index(gat, i));
    OuterSpec gp = checked(gat, [&] {
      return OuterSpec::grid(BoundaryGrid(std::move(samples)));
    });
    h = any ? h.times(gp) : gp;
    any = true;
  }
  if (!any) fail(at, "expected \"rational\" and/or \"grid\"");
  return h;
}

FactoredDisc parse_disc(const json& j, const std::string& at) {
  check_schema(j, at);
  int dim = int_at(need(j, "dimension", at), join(at, "dimension"));
  const json& comps =
      array_at(need(j, "components", at), join(at, "components"));
  if (dim < 1 || static_cast<std::size_t>(dim) != comps.size())
    fail(join(at, "dimension"),
         "must be >= 1 and equal the number of components");
  std::vector<FactoredComponent> components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const json& c = comps[i];
    std::string cat = index(join(at, "components"), i);
    if (!c.is_object()) fail(cat, "expected an object");
    BlaschkeData b;
    OuterSpec h = OuterSpec::one();
    AtomicMeasure sn, sd;
    if (c.contains("blaschke")) b = parse_blaschke(c["blaschke"], join(cat, "blaschke"));
    if (c.contains("outer")) h = parse_outer(c["outer"], join(cat, "outer"));
    if (c.contains("sing_num")) sn = parse_measure(c["sing_num"], join(cat, "sing_num"));
    if (c.contains("sing_den")) sd = parse_measure(c["sing_den"], join(cat, "sing_den"));
    components.push_back(checked(cat, [&] {
      return FactoredComponent::make(std::move(b), std::move(h), std::move(sn),
                                     std::move(sd));
    }));
  }
  return checked(at.empty() ? "disc" : at,
                 [&] { return FactoredDisc::make(std::move(components)); });
}

json measure_json(const AtomicMeasure& m) {
  json a = json::array();
  for (const auto& atom : m.atoms)
    a.push_back(json::array({atom.angle, atom.mass}));
  return a;
}

json outer_json(const OuterSpec& h) {
  json o = json::object();
  if (h.has_rational)
    o["rational"] = {{"num", poly_json(h.num)}, {"den", poly_json(h.den)}};
  if (h.has_grid) {
    json g = json::array();
    for (Eigen::Index i = 0; i < h.grid_log_mod.size(); ++i)
      g.push_back(h.grid_log_mod[i]);
    o["grid"] = std::move(g);
  }
  return o;
}

json disc_json(const FactoredDisc& d) {
  json comps = json::array();
  for (const auto& c : d.components) {
    json cj = json::object();
    if (!c.blaschke.empty()) {
      json b = json::array();
      for (const auto& z : c.blaschke.zeros)
        b.push_back(json::array({z.a.real(), z.a.imag(), z.mult}));
      cj["blaschke"] = std::move(b);
    }
    if (!c.outer.trivial()) cj["outer"] = outer_json(c.outer);
    if (!c.sing_num.empty()) cj["sing_num"] = measure_json(c.sing_num);
    if (!c.sing_den.empty()) cj["sing_den"] = measure_json(c.sing_den);
    comps.push_back(std::move(cj));
  }
  return {{"schema", kSchema},
          {"dimension", static_cast<int>(d.components.size())},
          {"components", std::move(comps)}};
}

// --- gluing spec -------------------------------------------------------------

std::vector<Polynomial> polys_at(const json& j, const std::string& at) {
  array_at(j, at);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(poly_at(j[i], index(at, i)));
  return out;
}

GluingSpec parse_gluing(const json& j, const std::string& at) {
  check_schema(j, at);
  ClosedPolyDisc base = checked(join(at, "base"), [&] {
    return ClosedPolyDisc::make(
        polys_at(need(j, "base", at), join(at, "base")));
  });
  const json& arcs_j = array_at(need(j, "arcs", at), join(at, "arcs"));
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < arcs_j.size(); ++i) {
    const json& a = arcs_j[i];
    std::string aat = index(join(at, "arcs"), i);
    if (!a.is_array() || a.size() != 2)
      fail(aat, "expected an arc as [start, end]");
    double s = num_at(a[0], index(aat, 0)), e = num_at(a[1], index(aat, 1));
    arcs.push_back(checked(aat, [&] { return Arc::from_angles(s, e); }));
  }
  ArcPartition partition = checked(
      join(at, "arcs"), [&] { return ArcPartition::make(std::move(arcs)); });
  const json& anchors_j =
      array_at(need(j, "anchors", at), join(at, "anchors"));
  std::vector<double> anchors;
  for (std::size_t i = 0; i < anchors_j.size(); ++i)
    anchors.push_back(num_at(anchors_j[i], index(join(at, "anchors"), i)));
  const json& att_j = array_at(need(j, "attached", at), join(at, "attached"));
  std::vector<ClosedPolyLift> attached;
  for (std::size_t i = 0; i < att_j.size(); ++i) {
    std::string lat = index(join(at, "attached"), i);
    attached.push_back(checked(
        lat, [&] { return ClosedPolyLift::make(polys_at(att_j[i], lat)); }));
  }
  int m = int_at(need(j, "m", at), join(at, "m"));
  return checked(at.empty() ? "gluing" : at, [&] {
    return GluingSpec::make(std::move(base), std::move(partition),
                            std::move(anchors), std::move(attached), m);
  });
}

json lift_json(const ClosedPolyLift& lift) {
  json a = json::array();
  for (const auto& p : lift.components) a.push_back(poly_json(p));
  return a;
}

json gluing_json(const GluingSpec& g) {
  json base = json::array();
  for (const auto& p : g.base.components) base.push_back(poly_json(p));
  json arcs = json::array();
  for (const Arc& a : g.arcs.arcs)
    arcs.push_back(json::array({a.start, a.end}));
  json anchors = json::array();
  for (double a : g.anchors) anchors.push_back(a);
  json attached = json::array();
  for (const auto& lift : g.attached) attached.push_back(lift_json(lift));
  return {{"schema", kSchema},     {"base", std::move(base)},
          {"arcs", std::move(arcs)}, {"anchors", std::move(anchors)},
          {"attached", std::move(attached)}, {"m", g.m}};
}

// --- result artifacts --------------------------------------------------------

const char* family_name(DiscFamily f) {
  switch (f) {
    case DiscFamily::ball: return "ball";
    case DiscFamily::rational: return "rational";
    case DiscFamily::glued: return "glued";
  }
  return "ball";
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json envelope_json(const EnvelopeResult& r, bool with_schema) {
  json j = json::object();
  if (with_schema) j["schema"] = kSchema;
  j["family"] = family_name(r.family);
  j["value"] = finite_or_null(r.value);
  j["has_certificate"] = r.has_certificate;
  j["validity"] = {{"grid", r.validity.grid},
                   {"fraction_inside", r.validity.fraction_inside},
                   {"budget", r.validity.budget},
                   {"m", r.validity.m},
                   {"seed", r.validity.seed}};
  if (r.has_certificate) {
    if (r.family == DiscFamily::glued)
      j["certificate"] = {{"gluing", gluing_json(r.glued)}};
    else
      j["certificate"] = {{"lift", lift_json(r.lift)}};
  }
  return j;
}

const char* status_name(HullStatus s) {
  switch (s) {
    case HullStatus::in_hull_evidence: return "in_hull_evidence";
    case HullStatus::not_in_hull: return "not_in_hull";
    case HullStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

json verdict_json(const HullVerdict& v) {
  json levels = json::array();
  for (const auto& lv : v.levels) {
    levels.push_back({{"delta", lv.delta},
                      {"eps", lv.eps},
                      {"value", finite_or_null(lv.value)},
                      {"center_error", finite_or_null(lv.center_error)},
                      {"fraction_inside", lv.fraction_inside},
                      {"ok", lv.ok},
                      {"certificate",
                       envelope_json(lv.certificate, /*with_schema=*/false)}});
  }
  json j = {{"schema", kSchema},
            {"status", status_name(v.status)},
            {"levels", std::move(levels)},
            {"poly_available", v.poly_available}};
  if (v.poly_available) {
    json coeffs = json::array();
    for (cplx c : v.poly.coefficients) coeffs.push_back(complex_json(c));
    j["poly"] = {{"coefficients", std::move(coeffs)},
                 {"at_point", finite_or_null(v.poly.at_point)},
                 {"over_samples", finite_or_null(v.poly.over_samples)},
                 {"separating", v.poly.separating},
                 {"degenerate", v.poly.degenerate}};
  }
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

SetGeometry read_geometry(const std::string& path) {
  return from_file(path, parse_geometry);
}

SetGeometry geometry_from_string(const std::string& text,
                                 const std::string& origin) {
  return parse_geometry(parse_text(text, origin), origin);
}

std::string geometry_to_string(const SetGeometry& X) {
  return dump(geometry_json(X));
}

void write_geometry(const SetGeometry& X, const std::string& path) {
  spill(geometry_to_string(X), path);
}

FactoredDisc read_disc(const std::string& path) {
  return from_file(path, parse_disc);
}

FactoredDisc disc_from_string(const std::string& text,
                              const std::string& origin) {
  return parse_disc(parse_text(text, origin), origin);
}

std::string disc_to_string(const FactoredDisc& d) { return dump(disc_json(d)); }

void write_disc(const FactoredDisc& d, const std::string& path) {
  spill(disc_to_string(d), path);
}

GluingSpec read_gluing(const std::string& path) {
  return from_file(path, parse_gluing);
}

GluingSpec gluing_from_string(const std::string& text,
                              const std::string& origin) {
  return parse_gluing(parse_text(text, origin), origin);
}

std::string gluing_to_string(const GluingSpec& g) {
  return dump(gluing_json(g));
}

void write_gluing(const GluingSpec& g, const std::string& path) {
  spill(gluing_to_string(g), path);
}

std::string envelope_to_string(const EnvelopeResult& r) {
  return dump(envelope_json(r, /*with_schema=*/true));
}

void write_envelope(const EnvelopeResult& r, const std::string& path) {
  spill(envelope_to_string(r), path);
}

std::string verdict_to_string(const HullVerdict& v) {
  return dump(verdict_json(v));
}

void write_verdict(const HullVerdict& v, const std::string& path) {
  spill(verdict_to_string(v), path);
}

std::string grid_csv(const std::vector<GridRow>& rows) {
  std::string out = "re,im,value,family\n";
  char buf[160];
  for (const GridRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%s\n", r.z.real(),
                  r.z.imag(), r.value, family_name(r.family));
    out += buf;
  }
  return out;
}

void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path) {
  spill(grid_csv(rows), path);
}

}  // namespace sz::io
