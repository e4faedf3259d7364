#include "sz/disc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sz/threads.hpp"

namespace sz {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double circ_dist(double a, double b) {
  return std::abs(std::remainder(a - b, kTwoPi));
}

}  // namespace

// --------------------------- SetGeometry -----------------------------------

SetGeometry SetGeometry::make(std::vector<Ball> balls, std::vector<Box> boxes,
                              double tolerance) {
  SetGeometry g;
  g.balls = std::move(balls);
  g.boxes = std::move(boxes);
  g.tolerance = tolerance;
  require(g.primitive_count() > 0, "geometry needs at least one primitive");
  require(std::isfinite(tolerance) && tolerance >= 0.0,
          "tolerance must be finite and nonnegative");
  Eigen::Index dim = 0;
  auto check_dim = [&dim](Eigen::Index n) {
    require(n >= 1, "primitives need at least one coordinate");
    if (dim == 0) dim = n;
    require(dim == n, "all primitives must share one dimension");
  };
  for (const Ball& b : g.balls) {
    check_dim(b.center.size());
    require(b.center.allFinite(), "ball center must be finite");
    require(std::isfinite(b.radius) && b.radius > 0.0,
            "ball radius must be positive");
  }
  for (const Box& b : g.boxes) {
    check_dim(b.lo.size());
    require(b.hi.size() == b.lo.size(), "box corners must share one dimension");
    require(b.lo.allFinite() && b.hi.allFinite(), "box corners must be finite");
    for (Eigen::Index j = 0; j < b.lo.size(); ++j)
      require(b.hi[j].real() > b.lo[j].real() && b.hi[j].imag() > b.lo[j].imag(),
              "box widths must be strictly positive");
  }
  return g;
}

SetGeometry SetGeometry::single_ball(Eigen::VectorXcd center, double radius,
                                     double tolerance) {
  return make({Ball{std::move(center), radius}}, {}, tolerance);
}

int SetGeometry::dimension() const {
  return balls.empty() ? static_cast<int>(boxes.front().lo.size())
                       : static_cast<int>(balls.front().center.size());
}

double SetGeometry::margin(const Eigen::VectorXcd& p) const {
  require(p.size() == dimension(), "point dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (const Ball& b : balls) best = std::min(best, (p - b.center).norm() - b.radius);
  for (const Box& b : boxes) {
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.lo.size(); ++j) {
      m = std::max(m, b.lo[j].real() - p[j].real());
      m = std::max(m, p[j].real() - b.hi[j].real());
      m = std::max(m, b.lo[j].imag() - p[j].imag());
      m = std::max(m, p[j].imag() - b.hi[j].imag());
    }
    best = std::min(best, m);
  }
  return best;
}

double SetGeometry::diameter() const {
  std::vector<std::pair<Eigen::VectorXcd, double>> hulls;
  hulls.reserve(primitive_count());
  for (const Ball& b : balls) hulls.emplace_back(b.center, b.radius);
  for (const Box& b : boxes)
    hulls.emplace_back(((b.lo + b.hi) / 2.0).eval(), (b.hi - b.lo).norm() / 2.0);
  double d = 0.0;
  for (std::size_t i = 0; i < hulls.size(); ++i)
    for (std::size_t j = i; j < hulls.size(); ++j)
      d = std::max(d, (hulls[i].first - hulls[j].first).norm() +
                          hulls[i].second + hulls[j].second);
  return d;
}

SetGeometry SetGeometry::inflated(double delta) const {
  require(std::isfinite(delta) && delta >= 0.0,
          "inflation margin must be nonnegative");
  SetGeometry g = *this;
  const cplx corner(delta, delta);
  for (Ball& b : g.balls) b.radius += delta;
  for (Box& b : g.boxes) {
    b.lo.array() -= corner;
    b.hi.array() += corner;
  }
  return g;
}

SetGeometry SetGeometry::shrunk(double delta) const {
  require(std::isfinite(delta) && delta >= 0.0,
          "shrink margin must be nonnegative");
  std::vector<Ball> kept_balls;
  std::vector<Box> kept_boxes;
  const cplx corner(delta, delta);
  for (const Ball& b : balls)
    if (b.radius > delta) kept_balls.push_back({b.center, b.radius - delta});
  for (const Box& b : boxes) {
    bool ok = true;
    for (Eigen::Index j = 0; j < b.lo.size() && ok; ++j)
      ok = b.hi[j].real() - b.lo[j].real() > 2.0 * delta &&
           b.hi[j].imag() - b.lo[j].imag() > 2.0 * delta;
    if (ok)
      kept_boxes.push_back(
          {(b.lo.array() + corner).matrix(), (b.hi.array() - corner).matrix()});
  }
  require(!kept_balls.empty() || !kept_boxes.empty(),
          "shrinking collapses every primitive");
  return make(std::move(kept_balls), std::move(kept_boxes), tolerance);
}

// ------------------------- factored components ------------------------------

FactoredComponent FactoredComponent::make(BlaschkeData blaschke, OuterSpec outer,
                                          AtomicMeasure sing_num,
                                          AtomicMeasure sing_den) {
  for (const auto& a : sing_num.atoms)
    require(sing_den.mass_at(a.angle) == 0.0,
            "singular numerator and denominator must have disjoint atoms");
  FactoredComponent c;
  c.blaschke = std::move(blaschke);
  c.outer = std::move(outer);
  c.sing_num = std::move(sing_num);
  c.sing_den = std::move(sing_den);
  return c;
}

FactoredComponent FactoredComponent::constant(cplx value) {
  return make({}, OuterSpec::rational(Polynomial::constant(value),
                                      Polynomial::constant(1.0)),
              {}, {});
}

cplx FactoredComponent::eval(cplx z) const {
  cplx v = blaschke_eval(blaschke, z) * outer.eval(z);
  if (!sing_num.empty()) v *= singular_eval(sing_num, z);
  if (!sing_den.empty()) v /= singular_eval(sing_den, z);
  return v;
}

FactoredDisc FactoredDisc::make(std::vector<FactoredComponent> components) {
  if (components.empty())
    throw std::invalid_argument("disc needs at least one component");
  FactoredDisc d;
  d.components = std::move(components);
  return d;
}

Eigen::VectorXcd FactoredDisc::eval(cplx z) const {
  Eigen::VectorXcd v(components.size());
  for (std::size_t j = 0; j < components.size(); ++j) v[j] = components[j].eval(z);
  return v;
}

bool FactoredDisc::atom_free() const {
  for (const auto& c : components)
    if (!c.atom_free()) return false;
  return true;
}

LiftedDisc LiftedDisc::make(std::vector<FactoredComponent> components) {
  if (components.size() < 2)
    throw std::invalid_argument("lifting needs a zeroth and at least one more component");
  for (const auto& c : components) {
    if (!c.sing_den.empty())
      throw std::invalid_argument("lifted components must have empty singular denominators");
    if (!c.outer.bounded())
      throw std::invalid_argument("lifted components must have bounded outer parts");
  }
  LiftedDisc d;
  d.components = std::move(components);
  return d;
}

Eigen::VectorXcd LiftedDisc::eval(cplx z) const {
  Eigen::VectorXcd v(components.size());
  for (std::size_t j = 0; j < components.size(); ++j) v[j] = components[j].eval(z);
  return v;
}

Eigen::VectorXcd LiftedDisc::affine(cplx z) const {
  cplx v0 = components[0].eval(z);
  Eigen::VectorXcd v(dimension());
  for (int j = 0; j < dimension(); ++j) v[j] = components[j + 1].eval(z) / v0;
  return v;
}

bool LiftedDisc::atom_free() const {
  for (const auto& c : components)
    if (!c.atom_free()) return false;
  return true;
}

double min_sample_norm(const LiftedDisc& d) {
  constexpr int kAngles = 512;
  const std::array<double, 8> radii = {0.05, 0.2,  0.4,  0.6,
                                       0.8,  0.9,  0.99, 1.0 - 1e-6};
  std::vector<double> norms(radii.size() * kAngles);
  parallel_for(norms.size(), [&](std::size_t i) {
    const double r = radii[i / kAngles];
    const double theta = kTwoPi * static_cast<double>(i % kAngles) / kAngles;
    norms[i] = d.eval(std::polar(r, theta)).norm();
  });
  return *std::min_element(norms.begin(), norms.end());
}

LiftedDisc lift(const FactoredDisc& f) {
  const auto& comps = f.components;
  std::vector<AtomicMeasure> dens;
  dens.reserve(comps.size());
  for (const auto& c : comps) dens.push_back(c.sing_den);
  const AtomicMeasure nu = measure_join(dens);

  std::vector<std::pair<OuterSpec, OuterSpec>> uv;
  uv.reserve(comps.size());
  for (const auto& c : comps) uv.push_back(c.outer.split_uv());

  std::vector<FactoredComponent> out;
  out.reserve(comps.size() + 1);
  OuterSpec v_all = OuterSpec::one();
  for (const auto& s : uv) v_all = v_all.times(s.second);
  out.push_back(FactoredComponent::make({}, v_all, nu, {}));

  for (std::size_t j = 0; j < comps.size(); ++j) {
    OuterSpec o = uv[j].first;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (i != j) o = o.times(uv[i].second);
    AtomicMeasure s =
        measure_add(measure_subtract(nu, comps[j].sing_den), comps[j].sing_num);
    out.push_back(FactoredComponent::make(comps[j].blaschke, o, std::move(s), {}));
  }
  return LiftedDisc::make(std::move(out));
}

// ------------------------- closed polynomial discs --------------------------

namespace {

void require_finite_polys(const std::vector<Polynomial>& ps) {
  for (const Polynomial& p : ps)
    require(p.c.allFinite(), "polynomial coefficients must be finite");
}

}  // namespace

ClosedPolyDisc ClosedPolyDisc::make(std::vector<Polynomial> components) {
  require(!components.empty(), "closed disc needs at least one component");
  require_finite_polys(components);
  ClosedPolyDisc d;
  d.components = std::move(components);
  return d;
}

ClosedPolyDisc ClosedPolyDisc::constant(const Eigen::VectorXcd& p) {
  std::vector<Polynomial> comps;
  comps.reserve(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j)
    comps.push_back(Polynomial::constant(p[j]));
  return make(std::move(comps));
}

Eigen::VectorXcd ClosedPolyDisc::eval(cplx z) const {
  Eigen::VectorXcd v(components.size());
  for (std::size_t j = 0; j < components.size(); ++j) v[j] = components[j].eval(z);
  return v;
}

ClosedPolyLift ClosedPolyLift::make(std::vector<Polynomial> components) {
  require(components.size() >= 2,
          "lifting needs a zeroth and at least one more component");
  require_finite_polys(components);
  require(!components.front().is_zero(),
          "zeroth component must not vanish identically");
  ClosedPolyLift d;
  d.components = std::move(components);
  return d;
}

Eigen::VectorXcd ClosedPolyLift::eval(cplx z) const {
  Eigen::VectorXcd v(components.size());
  for (std::size_t j = 0; j < components.size(); ++j) v[j] = components[j].eval(z);
  return v;
}

Eigen::VectorXcd ClosedPolyLift::affine(cplx z) const {
  const cplx p0 = components[0].eval(z);
  Eigen::VectorXcd v(dimension());
  for (int j = 0; j < dimension(); ++j) v[j] = components[j + 1].eval(z) / p0;
  return v;
}

LiftedDisc to_lifted(const ClosedPolyLift& d) {
  std::vector<FactoredComponent> out;
  out.reserve(d.components.size());
  for (const Polynomial& p : d.components) {
    require(!p.is_zero(), "zero component has no factored form");
    std::vector<BlaschkeData::Zero> inner;
    Polynomial h = Polynomial::constant(p.c[p.top_index()]);
    for (cplx root : p.roots()) {
      if (std::abs(root) < 1.0 - 1e-10) {
        inner.push_back({root, 1});
        if (root != 0.0) {
          // (z - a) = B_a(z) * |a| (z - 1/conj(a)); keep the outer factor.
          Eigen::VectorXcd lin(2);
          lin[0] = -1.0 / std::conj(root);
          lin[1] = 1.0;
          h = h.times(Polynomial(lin));
          h.c *= std::abs(root);
        }
      } else {
        Eigen::VectorXcd lin(2);
        lin[0] = -root;
        lin[1] = 1.0;
        h = h.times(Polynomial(lin));
      }
    }
    out.push_back(FactoredComponent::make(
        BlaschkeData::from(std::move(inner)),
        OuterSpec::rational(std::move(h), Polynomial::constant(1.0)), {}, {}));
  }
  return LiftedDisc::make(std::move(out));
}

// --------------------------- boundary sampling ------------------------------

namespace {

struct SamplingPolicy {
  double radius = 1.0 - 1e-6;
  std::vector<std::pair<double, double>> windows;  // atom angle, half width
};

SamplingPolicy sampling_policy(const std::vector<FactoredComponent>& comps,
                               int N) {
  SamplingPolicy pol;
  bool atoms = false;
  for (const auto& c : comps) atoms = atoms || !c.atom_free();
  if (!atoms) return pol;
  // Close to the circle the kept samples see each atom's singular factor at
  // nearly its boundary modulus: at angular distance w the log-modulus drift
  // is about 2(1-r) mass / w^2, kept below 1e-3 by the window choice.
  pol.radius = 1.0 - 1e-12;
  const double base = kTwoPi / (8.0 * N);
  for (const auto& c : comps)
    for (const auto* m : {&c.sing_num, &c.sing_den})
      for (const auto& a : m->atoms)
        pol.windows.emplace_back(
            a.angle,
            std::max(base, std::sqrt(2.0 * (1.0 - pol.radius) * a.mass / 1e-3)));
  return pol;
}

bool angle_skipped(const SamplingPolicy& pol, double theta) {
  for (const auto& w : pol.windows)
    if (circ_dist(theta, w.first) < w.second) return true;
  return false;
}

BoundarySampleReport sample_components(const std::vector<FactoredComponent>& comps,
                                       int N) {
  require(BoundaryGrid::valid_size(N),
          "sample count must be a power of two, at least 8");
  const SamplingPolicy pol = sampling_policy(comps, N);
  const int dim = static_cast<int>(comps.size());
  Eigen::MatrixXcd vals(dim, N);
  std::vector<char> keep(N, 1);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    const double theta = kTwoPi * static_cast<double>(i) / N;
    if (angle_skipped(pol, theta)) {
      keep[i] = 0;
      return;
    }
    const cplx z = std::polar(pol.radius, theta);
    for (int k = 0; k < dim; ++k) vals(k, static_cast<Eigen::Index>(i)) = comps[k].eval(z);
  });
  BoundarySampleReport rep;
  rep.radius = pol.radius;
  rep.grid = N;
  for (int i = 0; i < N; ++i) {
    const double theta = kTwoPi * i / N;
    if (!keep[static_cast<std::size_t>(i)]) {
      rep.skipped_angles.push_back(theta);
      continue;
    }
    rep.angles.push_back(theta);
    rep.samples.push_back(vals.col(i));
  }
  return rep;
}

BoundarySampleReport sample_polys(const std::vector<Polynomial>& ps, int N) {
  require(BoundaryGrid::valid_size(N),
          "sample count must be a power of two, at least 8");
  const int dim = static_cast<int>(ps.size());
  BoundarySampleReport rep;
  rep.radius = 1.0;
  rep.grid = N;
  rep.samples.assign(static_cast<std::size_t>(N), Eigen::VectorXcd(dim));
  rep.angles.resize(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    const double theta = kTwoPi * static_cast<double>(i) / N;
    const cplx z = std::polar(1.0, theta);
    rep.angles[i] = theta;
    for (int k = 0; k < dim; ++k) rep.samples[i][k] = ps[static_cast<std::size_t>(k)].eval(z);
  });
  return rep;
}

std::vector<Eigen::VectorXcd> affine_points(const std::vector<Eigen::VectorXcd>& lifted) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(lifted.size());
  for (const auto& s : lifted) {
    Eigen::VectorXcd p(s.size() - 1);
    for (Eigen::Index j = 0; j + 1 < s.size(); ++j) p[j] = s[j + 1] / s[0];
    out.push_back(std::move(p));
  }
  return out;
}

BoundaryMembershipReport membership_report(const std::vector<Eigen::VectorXcd>& pts,
                                           const SetGeometry& X, int grid,
                                           double skipped_fraction) {
  BoundaryMembershipReport rep;
  rep.grid = grid;
  rep.skipped_fraction = skipped_fraction;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  std::size_t inside = 0;
  for (const auto& p : pts) {
    if (!p.allFinite()) {
      rep.worst_margin = std::numeric_limits<double>::infinity();
      continue;
    }
    const double m = X.margin(p);
    rep.worst_margin = std::max(rep.worst_margin, m);
    if (m < -X.tolerance) ++inside;
  }
  rep.fraction_inside =
      pts.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(pts.size());
  return rep;
}

}  // namespace

BoundarySampleReport boundary_samples(const FactoredDisc& d, int N) {
  return sample_components(d.components, N);
}

BoundarySampleReport boundary_samples(const LiftedDisc& d, int N) {
  return sample_components(d.components, N);
}

BoundaryMembershipReport check_boundary_in(const FactoredDisc& d,
                                           const SetGeometry& X, int N) {
  const BoundarySampleReport rep = boundary_samples(d, N);
  return membership_report(rep.samples, X, rep.grid, rep.skipped_fraction());
}

BoundaryMembershipReport check_boundary_in(const LiftedDisc& d,
                                           const SetGeometry& X, int N) {
  const BoundarySampleReport rep = boundary_samples(d, N);
  return membership_report(affine_points(rep.samples), X, rep.grid,
                           rep.skipped_fraction());
}

BoundaryMembershipReport check_boundary_in(const ClosedPolyDisc& d,
                                           const SetGeometry& X, int N) {
  const BoundarySampleReport rep = sample_polys(d.components, N);
  return membership_report(rep.samples, X, rep.grid, 0.0);
}

BoundaryMembershipReport check_boundary_in(const ClosedPolyLift& d,
                                           const SetGeometry& X, int N) {
  const BoundarySampleReport rep = sample_polys(d.components, N);
  return membership_report(affine_points(rep.samples), X, rep.grid, 0.0);
}

bool check_bounded_quotient(const FactoredDisc& d) {
  for (const auto& c : d.components)
    if (!c.outer.bounded()) return false;
  return true;
}

bool check_bounded_quotient(const LiftedDisc& d) {
  for (const auto& c : d.components)
    if (!c.outer.bounded()) return false;
  return true;
}

}  // namespace sz
