#include "sz/glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sz/functionals.hpp"
#include "sz/threads.hpp"

namespace sz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_arc(const Arc& a) {
  require(std::isfinite(a.start) && std::isfinite(a.end) &&
              a.length() > 1e-12 && a.length() <= kTwoPi + 1e-12,
          "degenerate arc");
}

double wrap(double theta) {
  double d = std::fmod(theta, kTwoPi);
  return d < 0 ? d + kTwoPi : d;
}

// Circle distance between two angles.
double circ_dist(double a, double b) {
  return std::abs(std::remainder(a - b, kTwoPi));
}

cplx alpha_from_w(int m, cplx w) {
  return std::exp(-static_cast<double>(m) * (1.0 - w));
}

}  // namespace

ArcPartition ArcPartition::make(std::vector<Arc> raw) {
  require(!raw.empty(), "ArcPartition: at least one arc required");
  for (const Arc& a : raw) require_arc(a);
  if (raw.size() == 1) {
    require(raw.front().full(), "ArcPartition: arcs do not cover the circle");
    return ArcPartition{std::move(raw)};
  }
  double total = 0.0;
  for (const Arc& a : raw) total += a.length();
  require(std::abs(total - kTwoPi) <= 1e-6,
          "ArcPartition: arc lengths do not sum to the full circle");
  std::sort(raw.begin(), raw.end(),
            [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> snapped;
  snapped.reserve(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    double next_start = raw[(j + 1) % raw.size()].start;
    require(circ_dist(wrap(raw[j].end), next_start) <= 1e-9,
            "ArcPartition: arcs leave a gap or overlap");
    snapped.push_back(Arc::from_angles(raw[j].start, next_start));
  }
  return ArcPartition{std::move(snapped)};
}

ArcPartition ArcPartition::equal_arcs(int k, double start) {
  require(k >= 1, "ArcPartition: at least one arc required");
  require(std::isfinite(start), "ArcPartition: start must be finite");
  if (k == 1) return ArcPartition{{Arc::full_circle()}};
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    arcs.push_back(Arc::from_angles(start + kTwoPi * j / k,
                                    start + kTwoPi * (j + 1) / k));
  return make(std::move(arcs));
}

std::vector<double> ArcPartition::midpoints() const {
  std::vector<double> out;
  out.reserve(arcs.size());
  for (const Arc& a : arcs) out.push_back(a.midpoint());
  return out;
}

int ArcPartition::arc_containing(double theta) const {
  for (std::size_t j = 0; j < arcs.size(); ++j)
    if (arcs[j].contains(theta)) return static_cast<int>(j);
  // Unreachable for a valid partition; guard against rounding at the seam.
  return 0;
}

cplx alpha(const Arc& a, int m, cplx z) {
  require_arc(a);
  require(m >= 0, "alpha: m must be >= 0");
  require(std::abs(z) < 1.0, "alpha: |z| must be < 1");
  if (m == 0) return cplx(1.0, 0.0);
  return alpha_from_w(m, harmonic_measure_arc(a, z).W);
}

cplx alpha_boundary(const Arc& a, int m, double theta) {
  require_arc(a);
  require(m >= 0, "alpha_boundary: m must be >= 0");
  require(std::isfinite(theta), "alpha_boundary: angle must be finite");
  if (m == 0) return cplx(1.0, 0.0);
  return alpha_from_w(m, harmonic_measure_arc_boundary(a, theta).W);
}

std::vector<cplx> alpha_moments(const Arc& a, int m, int k_max) {
  require_arc(a);
  require(m >= 1, "alpha_moments: m must be >= 1");
  require(k_max >= 0, "alpha_moments: k_max must be >= 0");
  std::vector<cplx> out(static_cast<std::size_t>(k_max) + 1);
  if (a.full()) {
    // alpha is the constant 1, so every moment is the full mass.
    std::fill(out.begin(), out.end(), cplx(1.0, 0.0));
    return out;
  }

  // On the arc, alpha* = exp(i m t) with t the conjugate of the harmonic
  // measure. Substituting u = t(theta) turns each moment into the Fourier
  // integral of a smooth, exponentially decaying weight:
  //   theta(u) = mid + 2 atan(T tanh(pi u / 2)),  T = tan(length / 4),
  //   moment_k = int exp(i k m u) w(u) du,
  //   w(u) = (T / 2) sech^2(pi u / 2) / (1 + T^2 tanh^2(pi u / 2)).
  // The trapezoid rule on a truncated u-range is then spectrally accurate.
  const double T = std::tan(0.25 * a.length());
  const double U = 12.0;  // tail beyond |u| = 12 carries < 1e-15 mass
  const double fastest = static_cast<double>(m) * std::max(1, k_max);
  int n = 1 << 16;
  while (n < 32.0 * fastest && n < (1 << 24)) n <<= 1;

  const double h = 2.0 * U / n;
  Eigen::ArrayXd weight(n + 1);
  Eigen::ArrayXcd phase(n + 1);
  parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t i) {
    const double u = -U + h * static_cast<double>(i);
    const double th = std::tanh(0.5 * kPi * u);
    const double sech2 = 1.0 - th * th;
    weight[static_cast<Eigen::Index>(i)] =
        0.5 * T * sech2 / (1.0 + T * T * th * th);
    phase[static_cast<Eigen::Index>(i)] =
        std::polar(1.0, static_cast<double>(m) * u);
  });
  weight[0] *= 0.5;
  weight[n] *= 0.5;

  Eigen::ArrayXcd power = Eigen::ArrayXcd::Ones(n + 1);
  for (int k = 0; k <= k_max; ++k) {
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) acc += weight[i] * power[i];
    out[static_cast<std::size_t>(k)] = acc * h;
    power *= phase;
  }
  return out;
}

GClassReport g_class_check(const ClosedPolyLift& d, int grid) {
  require(BoundaryGrid::valid_size(grid),
          "g_class_check: grid must be a power of two >= 8");
  double lo = kInf, hi = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double norm = d.eval(std::polar(1.0, kTwoPi * k / grid)).norm();
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  GClassReport rep;
  rep.max_ratio = lo > 0.0 ? hi / lo : kInf;
  rep.passes = rep.max_ratio < 2.0;
  return rep;
}

bool ball_radius_condition(const Eigen::VectorXcd& c, double r) {
  require(r > 0.0 && std::isfinite(r), "ball_radius_condition: radius must be positive");
  const double nc = c.norm();
  return (1.0 + (nc + r) * (nc + r)) < 4.0 * (1.0 + (nc - r) * (nc - r));
}

BallDiscResult ball_disc(const Eigen::VectorXcd& z, const Eigen::VectorXcd& c,
                         double r) {
  require(z.size() >= 1 && z.size() == c.size(),
          "ball_disc: point and center must share a dimension");
  require(r > 0.0 && std::isfinite(r), "ball_disc: radius must be positive");
  require(z.allFinite() && c.allFinite(), "ball_disc: data must be finite");
  const double dist = (z - c).norm();
  require(dist > r, "ball_disc: point must lie outside the closed ball");
  const double b = r / dist;

  std::vector<Polynomial> comps;
  comps.reserve(static_cast<std::size_t>(z.size()) + 1);
  Eigen::VectorXcd p0(2);
  p0 << 1.0, -1.0 / b;
  comps.push_back(Polynomial(p0));
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    Eigen::VectorXcd pj(2);
    pj << z[j], -(b * (z[j] - c[j]) + c[j] / b);
    comps.push_back(Polynomial(pj));
  }

  BallDiscResult result{ClosedPolyLift::make(std::move(comps)), {},
                        std::log(dist) - std::log(r)};
  // The norm-ratio condition is evaluated on the representative whose zeroth
  // component is the unimodular disc automorphism, where the boundary norm is
  // sqrt(1 + ||f||^2) with f the affine boundary values.
  const int grid = 1 << 12;
  double lo = kInf, hi = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double n2 =
        1.0 + result.lifting.affine(std::polar(1.0, kTwoPi * k / grid))
                  .squaredNorm();
    lo = std::min(lo, n2);
    hi = std::max(hi, n2);
  }
  result.g_class.max_ratio = std::sqrt(hi / lo);
  result.g_class.passes = result.g_class.max_ratio < 2.0;
  return result;
}

GluingSpec GluingSpec::make(ClosedPolyDisc base, ArcPartition arcs,
                            std::vector<double> anchors,
                            std::vector<ClosedPolyLift> attached, int m) {
  const std::size_t k = arcs.arcs.size();
  require(k >= 1, "GluingSpec: at least one arc required");
  require(anchors.size() == k && attached.size() == k,
          "GluingSpec: arcs, anchors, attached must have equal length");
  require(m >= 1, "GluingSpec: m must be >= 1");
  const int n = base.dimension();
  for (std::size_t j = 0; j < k; ++j) {
    require(std::isfinite(anchors[j]) && arcs.arcs[j].contains(anchors[j]),
            "GluingSpec: anchor outside its arc");
    require(attached[j].dimension() == n,
            "GluingSpec: attached lifting dimension mismatch");
    const Eigen::VectorXcd got = attached[j].eval(cplx(0.0, 0.0));
    Eigen::VectorXcd want(n + 1);
    want[0] = 1.0;
    want.tail(n) = base.eval(std::polar(1.0, anchors[j]));
    require((got - want).cwiseAbs().maxCoeff() <= 1e-10,
            "GluingSpec: attached lifting must equal (1, base(anchor)) at 0");
  }
  GluingSpec spec;
  spec.base = std::move(base);
  spec.arcs = std::move(arcs);
  spec.anchors = std::move(anchors);
  spec.attached = std::move(attached);
  spec.m = m;
  return spec;
}

GluedDisc glue(const GluingSpec& spec) {
  GluedDisc g;
  g.spec = spec;
  const std::size_t k = spec.arcs.arcs.size();
  g.alpha_at0.reserve(k);
  g.attached_at_alpha0.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    // Use the same evaluation path as eval(0) so g(0) = (1, base(0)) exactly.
    const cplx a0 = alpha(spec.arcs.arcs[j], spec.m, cplx(0.0, 0.0));
    g.alpha_at0.push_back(a0);
    g.attached_at_alpha0.push_back(spec.attached[j].eval(a0));
  }
  return g;
}

namespace {

// Adds attached(a) - attached(alpha_0) into v coordinate by coordinate with
// scalar Horner evaluations; the vector-expression form allocated one
// temporary per arc, which dominated the cost of dense boundary sampling.
void add_attachment(const ClosedPolyLift& attached,
                    const Eigen::VectorXcd& at_alpha0, cplx a,
                    Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] += attached.components[static_cast<std::size_t>(i)].eval(a) -
            at_alpha0[i];
}

}  // namespace

Eigen::VectorXcd GluedDisc::eval(cplx z) const {
  const int n = dimension();
  Eigen::VectorXcd v(n + 1);
  v[0] = 1.0;
  v.tail(n) = spec.base.eval(z);
  for (std::size_t j = 0; j < spec.arcs.arcs.size(); ++j) {
    const cplx a = alpha(spec.arcs.arcs[j], spec.m, z);
    add_attachment(spec.attached[j], attached_at_alpha0[j], a, v);
  }
  return v;
}

Eigen::VectorXcd GluedDisc::boundary_eval(double theta) const {
  const int n = dimension();
  Eigen::VectorXcd v(n + 1);
  v[0] = 1.0;
  v.tail(n) = spec.base.eval(std::polar(1.0, theta));
  for (std::size_t j = 0; j < spec.arcs.arcs.size(); ++j) {
    const cplx a = alpha_boundary(spec.arcs.arcs[j], spec.m, theta);
    add_attachment(spec.attached[j], attached_at_alpha0[j], a, v);
  }
  return v;
}

namespace {

// Angles within the window of any arc endpoint are skipped: the boundary
// limit is undefined exactly at endpoints and ill-conditioned right next to
// them, and the window's measure is a vanishing fraction of the circle.
bool near_endpoint(const ArcPartition& arcs, double theta, double window) {
  for (const Arc& a : arcs.arcs) {
    if (a.full()) continue;
    if (circ_dist(theta, a.start) < window || circ_dist(theta, a.end) < window)
      return true;
  }
  return false;
}

}  // namespace

GClassReport g_class_check(const GluedDisc& d, int grid) {
  require(BoundaryGrid::valid_size(grid),
          "g_class_check: grid must be a power of two >= 8");
  const double window = std::max(kTwoPi / (8.0 * grid), 1e-11);
  double lo = kInf, hi = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double theta = kTwoPi * k / grid;
    if (near_endpoint(d.spec.arcs, theta, window)) continue;
    const double norm = d.boundary_eval(theta).norm();
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  GClassReport rep;
  rep.max_ratio = lo > 0.0 ? hi / lo : kInf;
  rep.passes = rep.max_ratio < 2.0;
  return rep;
}

GluingBoundReport gluing_upper_bound(const GluingSpec& spec,
                                     const SetGeometry& X, int N) {
  require(BoundaryGrid::valid_size(N),
          "gluing_upper_bound: N must be a power of two >= 8");
  require(X.dimension() == spec.dimension(),
          "gluing_upper_bound: set and spec dimension mismatch");
  const GluedDisc g = glue(spec);
  const int n = spec.dimension();
  const std::size_t k = spec.arcs.arcs.size();

  // Affine boundary circles of the attached discs, for the distance report.
  // Distances are measured to the chord polyline through the samples, which
  // tracks the true curve to O(step^2) instead of the sample spacing.
  const int circle_grid = 1 << 11;
  std::vector<Eigen::MatrixXcd> circles(k);
  for (std::size_t j = 0; j < k; ++j) {
    circles[j].resize(n, circle_grid);
    for (int i = 0; i < circle_grid; ++i)
      circles[j].col(i) =
          spec.attached[j].affine(std::polar(1.0, kTwoPi * i / circle_grid));
  }

  const double window = std::max(kTwoPi / (8.0 * N), 1e-11);
  Eigen::ArrayXd log_mod(N), margin(N), dist(N);
  std::vector<char> keep(static_cast<std::size_t>(N), 0);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    const double theta = kTwoPi * static_cast<double>(i) / N;
    if (near_endpoint(spec.arcs, theta, window)) return;
    keep[i] = 1;
    const Eigen::Index idx = static_cast<Eigen::Index>(i);
    const Eigen::VectorXcd v = g.boundary_eval(theta);
    const double mod0 = std::abs(v[0]);
    log_mod[idx] = std::log(mod0);
    if (!(mod0 > 0.0) || !v.allFinite()) {
      log_mod[idx] = -kInf;
      margin[idx] = kInf;
      dist[idx] = kInf;
      return;
    }
    const Eigen::VectorXcd p = v.tail(n) / v[0];
    if (!p.allFinite()) {
      margin[idx] = kInf;
      dist[idx] = kInf;
      return;
    }
    margin[idx] = X.margin(p);
    const Eigen::MatrixXcd& ring =
        circles[static_cast<std::size_t>(spec.arcs.arc_containing(theta))];
    double best2 = kInf;
    for (int c = 0; c < circle_grid; ++c) {
      const int c1 = (c + 1) % circle_grid;
      double len2 = 0.0, dot = 0.0;
      bool finite = true;
      for (int i = 0; i < n; ++i) {
        const cplx q0 = ring(i, c);
        const cplx dq = ring(i, c1) - q0;
        if (!std::isfinite(q0.real()) || !std::isfinite(q0.imag()) ||
            !std::isfinite(dq.real()) || !std::isfinite(dq.imag())) {
          finite = false;
          break;
        }
        len2 += std::norm(dq);
        dot += (std::conj(p[i] - q0) * dq).real();
      }
      if (!finite) continue;
      const double t = len2 > 0.0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const cplx q0 = ring(i, c);
        d2 += std::norm(p[i] - q0 - t * (ring(i, c1) - q0));
      }
      best2 = std::min(best2, d2);
    }
    dist[idx] = std::sqrt(best2);
  });

  GluingBoundReport rep;
  rep.grid = N;
  std::size_t kept = 0, inside = 0;
  double sum = 0.0, worst = -kInf, far = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!keep[static_cast<std::size_t>(i)]) continue;
    ++kept;
    sum += log_mod[i];
    worst = std::max(worst, margin[i]);
    far = std::max(far, dist[i]);
    if (margin[i] < -X.tolerance) ++inside;
  }
  rep.skipped_fraction = 1.0 - static_cast<double>(kept) / N;
  if (kept == 0) {
    rep.valid = false;
    return rep;
  }
  const double at0 = std::abs(g.eval(cplx(0.0, 0.0))[0]);
  rep.bound = sum / static_cast<double>(kept) - std::log(at0);
  rep.fraction_inside = static_cast<double>(inside) / static_cast<double>(kept);
  rep.worst_margin = worst;
  rep.max_attached_distance = far;
  for (std::size_t j = 0; j < k; ++j)
    rep.sum_attached_j +=
        spec.arcs.arcs[j].fraction() * J_of(spec.attached[j]).value;
  rep.valid = rep.fraction_inside == 1.0;
  return rep;
}

}  // namespace sz
