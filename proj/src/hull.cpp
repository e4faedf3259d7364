#include "sz/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sz/glue.hpp"
#include "sz/threads.hpp"

namespace sz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

// Boundary samples of every primitive: ball circles (planar balls only) and
// box perimeters. For polynomials the sup over the union is attained on
// primitive boundaries, so these samples carry the Chebyshev problem.
std::vector<cplx> boundary_cloud(const SetGeometry& K, int per_primitive) {
  std::vector<cplx> pts;
  for (const Ball& b : K.balls)
    for (int k = 0; k < per_primitive; ++k)
      pts.push_back(b.center[0] +
                    b.radius * std::polar(1.0, kTwoPi * k / per_primitive));
  for (const Box& b : K.boxes) {
    const double x0 = b.lo[0].real(), x1 = b.hi[0].real();
    const double y0 = b.lo[0].imag(), y1 = b.hi[0].imag();
    const int per_edge = std::max(2, per_primitive / 4);
    for (int k = 0; k < per_edge; ++k) {
      const double t = static_cast<double>(k) / per_edge;
      pts.emplace_back(x0 + t * (x1 - x0), y0);
      pts.emplace_back(x1, y0 + t * (y1 - y0));
      pts.emplace_back(x1 - t * (x1 - x0), y1);
      pts.emplace_back(x0, y1 - t * (y1 - y0));
    }
  }
  return pts;
}

namespace {

double eval_abs(const Eigen::VectorXcd& ascending, cplx w) {
  cplx acc = ascending[ascending.size() - 1];
  for (Eigen::Index k = ascending.size() - 2; k >= 0; --k)
    acc = acc * w + ascending[k];
  return std::abs(acc);
}

// ||f(0) - a|| of the certificate disc. Constructed certificates satisfy
// this by construction; the check is independent of the construction.
double center_error(const EnvelopeResult& r, const Eigen::VectorXcd& a) {
  if (r.family == DiscFamily::glued)
    return (glue(r.glued).eval(cplx(0.0, 0.0)).tail(a.size()) - a).norm();
  return (r.lift.affine(cplx(0.0, 0.0)) - a).norm();
}

// Boundary membership of the certificate against the full neighbourhood.
double fraction_on(const EnvelopeResult& r, const SetGeometry& U, int N) {
  if (r.family == DiscFamily::glued)
    return gluing_upper_bound(r.glued, U, N).fraction_inside;
  return check_boundary_in(r.lift, U, N).fraction_inside;
}

}  // namespace

HullVerdict hull_test(const SetGeometry& K, const Eigen::VectorXcd& a,
                      const HullOptions& opts) {
  require(a.size() == K.dimension(), "query dimension must match the compact");
  require(a.allFinite(), "query point must be finite");
  require(opts.eps > 0.0, "eps must be positive");
  require(opts.boundary_samples >= 4, "need at least 4 boundary samples");
  require(opts.poly_degree >= 1, "polynomial degree must be at least 1");

  std::vector<double> schedule = opts.schedule;
  if (schedule.empty()) {
    const double d = K.diameter();
    schedule = {0.1 * d, 0.05 * d, 0.02 * d, 0.01 * d};
  }
  require(!schedule.empty(), "schedule must be nonempty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    require(schedule[i] > 0.0, "schedule radii must be positive");
    if (i > 0)
      require(schedule[i] < schedule[i - 1],
              "schedule must be strictly decreasing");
  }

  HullVerdict verdict;
  verdict.levels.resize(schedule.size());

  // Disc side: one envelope run per neighbourhood radius, in parallel.
  parallel_for(schedule.size(), [&](std::size_t i) {
    HullLevelCertificate& lv = verdict.levels[i];
    lv.delta = schedule[i];
    lv.eps = opts.eps;
    // The envelope certifies boundaries inside the closure of its target;
    // running it on a slightly shrunk neighbourhood keeps those boundaries
    // strictly inside the full neighbourhood.
    const SetGeometry U_inner = K.inflated(lv.delta * (1.0 - 1e-6));
    const SetGeometry U_full = K.inflated(lv.delta);
    lv.certificate = envelope_best(U_inner, a, opts.families);
    lv.value = lv.certificate.value;
    if (!lv.certificate.has_certificate) {
      lv.center_error = kInf;
      return;
    }
    lv.center_error = center_error(lv.certificate, a);
    lv.fraction_inside = fraction_on(lv.certificate, U_full, opts.check_samples);
    lv.ok = lv.value < lv.eps && lv.center_error <= 1e-9 &&
            lv.fraction_inside == 1.0;
  });
  bool disc_ok = true;
  for (const HullLevelCertificate& lv : verdict.levels) disc_ok &= lv.ok;

  // Polynomial side, planar compacts only.
  bool poly_ok = false;
  if (K.dimension() == 1) {
    const std::vector<cplx> cloud = boundary_cloud(K, opts.boundary_samples);
    if (!cloud.empty()) {
      verdict.poly_available = true;
      const PolyLowerResult sep =
          poly_lower(cloud, a[0], opts.poly_degree, opts.poly);
      HullPolyCertificate& pc = verdict.poly;
      pc.coefficients = sep.coefficients;
      pc.at_point = eval_abs(pc.coefficients, a[0]);
      pc.over_samples = 0.0;
      for (cplx w : cloud)
        pc.over_samples = std::max(pc.over_samples, eval_abs(pc.coefficients, w));
      pc.degenerate = pc.over_samples == 0.0 && pc.at_point > 0.0;
      pc.separating = pc.at_point > (1.0 + 1e-9) * pc.over_samples &&
                      pc.at_point > 0.0;
      poly_ok = pc.separating;
    }
  }

  if (disc_ok && poly_ok)
    throw std::logic_error(
        "hull_test: membership and exclusion certificates both validated");
  if (poly_ok)
    verdict.status = HullStatus::not_in_hull;
  else if (disc_ok)
    verdict.status = HullStatus::in_hull_evidence;
  else
    verdict.status = HullStatus::inconclusive;
  return verdict;
}

}  // namespace sz
