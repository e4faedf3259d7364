#include "sz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sz/optimize.hpp"
#include "sz/polynomial.hpp"
#include "sz/threads.hpp"

namespace sz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// --------------------------------------------------------------------------
// Closed form
// --------------------------------------------------------------------------

}  // namespace

OracleValue closed_form(const SetGeometry& X, const Eigen::VectorXcd& z) {
  require(X.balls.size() == 1 && X.boxes.empty(),
          "closed form requires a single-ball target");
  const Ball& b = X.balls.front();
  require(z.size() == b.center.size(), "point dimension mismatch");
  require(z.allFinite(), "point must be finite");
  const double ratio = (z - b.center).norm() / b.radius;
  OracleValue out;
  out.method = OracleMethod::closed_form;
  out.value = ratio > 1.0 ? std::log(ratio) : 0.0;
  out.error_estimate = 0.0;
  return out;
}

// --------------------------------------------------------------------------
// Planar PDE solver
// --------------------------------------------------------------------------

namespace {

struct PlanarBall {
  double x, y, r;
};
struct PlanarBox {
  double xlo, xhi, ylo, yhi;
};

struct PlanarSet {
  std::vector<PlanarBall> balls;
  std::vector<PlanarBox> boxes;

  double margin(double x, double y) const {
    double best = kInf;
    for (const PlanarBall& b : balls)
      best = std::min(best, std::hypot(x - b.x, y - b.y) - b.r);
    for (const PlanarBox& b : boxes) {
      const double m = std::max(std::max(b.xlo - x, x - b.xhi),
                                std::max(b.ylo - y, y - b.yhi));
      best = std::min(best, m);
    }
    return best;
  }

  // Distance from the origin to the farthest target point.
  double reach() const {
    double far = 0.0;
    for (const PlanarBall& b : balls)
      far = std::max(far, std::hypot(b.x, b.y) + b.r);
    for (const PlanarBox& b : boxes)
      for (double cx : {b.xlo, b.xhi})
        for (double cy : {b.ylo, b.yhi}) far = std::max(far, std::hypot(cx, cy));
    return far;
  }

  // Half-width of the narrowest primitive; grids coarser than this cannot
  // represent the target.
  double narrowest() const {
    double s = kInf;
    for (const PlanarBall& b : balls) s = std::min(s, b.r);
    for (const PlanarBox& b : boxes)
      s = std::min(s, 0.5 * std::min(b.xhi - b.xlo, b.yhi - b.ylo));
    return s;
  }
};

PlanarSet planar_of(const SetGeometry& X) {
  require(X.dimension() == 1, "the PDE oracle requires a planar target");
  require(X.primitive_count() > 0, "the PDE oracle requires a nonempty target");
  PlanarSet s;
  s.balls.reserve(X.balls.size());
  for (const Ball& b : X.balls)
    s.balls.push_back({b.center[0].real(), b.center[0].imag(), b.radius});
  s.boxes.reserve(X.boxes.size());
  for (const Box& b : X.boxes)
    s.boxes.push_back({b.lo[0].real(), b.hi[0].real(), b.lo[0].imag(), b.hi[0].imag()});
  return s;
}

constexpr uint8_t kActive = 0;  // relaxed
constexpr uint8_t kZero = 1;    // inside the closed target, u = 0
constexpr uint8_t kOuter = 2;   // |w| >= R, u = log|w|

struct FdGrid {
  int m = 0;       // intervals per side
  double R = 0.0;  // half side length
  double h = 0.0;
  std::vector<double> u;
  std::vector<uint8_t> kind;

  std::size_t at(int i, int j) const {
    return static_cast<std::size_t>(j) * (m + 1) + i;
  }
  double coord(int k) const { return -R + h * k; }
};

FdGrid make_grid(const PlanarSet& X, int m, double R) {
  FdGrid g;
  g.m = m;
  g.R = R;
  g.h = 2.0 * R / m;
  const std::size_t nodes = static_cast<std::size_t>(m + 1) * (m + 1);
  g.u.assign(nodes, 0.0);
  g.kind.assign(nodes, kActive);
  parallel_for(static_cast<std::size_t>(m) + 1, [&](std::size_t jz) {
    const int j = static_cast<int>(jz);
    const double y = g.coord(j);
    for (int i = 0; i <= m; ++i) {
      const double x = g.coord(i);
      const std::size_t id = g.at(i, j);
      const double rr = std::hypot(x, y);
      if (X.margin(x, y) <= 0.0) {
        g.kind[id] = kZero;
      } else if (i == 0 || j == 0 || i == m || j == m || rr >= R) {
        g.kind[id] = kOuter;
        g.u[id] = std::log(rr);
      } else {
        g.u[id] = std::max(std::log(rr), 0.0);
      }
    }
  });
  return g;
}

// --------------------------------------------------------------------------
// The discrete problem (five-point Laplacian with staircase Dirichlet masks
// and log|w| outer data) is solved by multigrid V-cycles: red-black
// Gauss-Seidel smoothing, full-weighting restriction of the defect, bilinear
// prolongation of the coarse correction, and over-relaxation to tolerance on
// the coarsest (~100^2) level. The residual metric is the largest
// |four-neighbour defect| / 4 over relaxed nodes.
// --------------------------------------------------------------------------

struct MgLevel {
  FdGrid g;
  std::vector<double> rhs;     // zero on the finest level
  std::vector<double> defect;  // stays zero at non-relaxed nodes
  std::vector<double> rowmax;
};

MgLevel make_level(const PlanarSet& X, int m, double R) {
  MgLevel L;
  L.g = make_grid(X, m, R);
  L.rhs.assign(L.g.u.size(), 0.0);
  L.defect.assign(L.g.u.size(), 0.0);
  L.rowmax.assign(static_cast<std::size_t>(m) + 1, 0.0);
  return L;
}

// Red-black relaxation of 4u - (neighbour sum) = rhs; returns the largest
// nodal update.
double smooth(MgLevel& L, double omega) {
  FdGrid& g = L.g;
  const int m = g.m;
  const int stride = m + 1;
  double worst = 0.0;
  for (int color = 0; color < 2; ++color) {
    parallel_for(static_cast<std::size_t>(m) - 1, [&](std::size_t jz) {
      const int j = static_cast<int>(jz) + 1;
      const std::size_t base = static_cast<std::size_t>(j) * stride;
      double local = 0.0;
      double* u = g.u.data();
      const double* rhs = L.rhs.data();
      const uint8_t* kd = g.kind.data();
      const int i0 = ((1 + j) % 2 == color) ? 1 : 2;
      for (int i = i0; i < m; i += 2) {
        const std::size_t id = base + i;
        if (kd[id] != kActive) continue;
        const double s = u[id - 1] + u[id + 1] + u[id - stride] + u[id + stride];
        const double d = omega * (0.25 * (s + rhs[id]) - u[id]);
        u[id] += d;
        local = std::max(local, std::abs(d));
      }
      L.rowmax[j] = local;
    });
    for (int j = 1; j < m; ++j) worst = std::max(worst, L.rowmax[j]);
  }
  return worst;
}

// Fills the defect rhs + (neighbour sum) - 4u on relaxed nodes and returns
// the residual metric max |defect| / 4.
double defect_pass(MgLevel& L) {
  FdGrid& g = L.g;
  const int m = g.m;
  const int stride = m + 1;
  parallel_for(static_cast<std::size_t>(m) - 1, [&](std::size_t jz) {
    const int j = static_cast<int>(jz) + 1;
    const std::size_t base = static_cast<std::size_t>(j) * stride;
    double local = 0.0;
    const double* u = g.u.data();
    const double* rhs = L.rhs.data();
    const uint8_t* kd = g.kind.data();
    double* d = L.defect.data();
    for (int i = 1; i < m; ++i) {
      const std::size_t id = base + i;
      if (kd[id] != kActive) continue;
      const double s = u[id - 1] + u[id + 1] + u[id - stride] + u[id + stride];
      const double def = rhs[id] + s - 4.0 * u[id];
      d[id] = def;
      local = std::max(local, std::abs(def));
    }
    L.rowmax[j] = local;
  });
  double worst = 0.0;
  for (int j = 1; j < m; ++j) worst = std::max(worst, L.rowmax[j]);
  return 0.25 * worst;
}

// Coarse right side = 4 x full weighting of the fine defect; the coarse
// iterate starts from zero (it approximates the fine algebraic error).
void restrict_defect(const MgLevel& f, MgLevel& c) {
  std::fill(c.g.u.begin(), c.g.u.end(), 0.0);
  const int mc = c.g.m;
  const int fs = f.g.m + 1;
  parallel_for(static_cast<std::size_t>(mc) - 1, [&](std::size_t Jz) {
    const int J = static_cast<int>(Jz) + 1;
    const double* d = f.defect.data();
    for (int I = 1; I < mc; ++I) {
      const std::size_t cid = c.g.at(I, J);
      if (c.g.kind[cid] != kActive) {
        c.rhs[cid] = 0.0;
        continue;
      }
      const std::size_t fid = f.g.at(2 * I, 2 * J);
      const double fw = 4.0 * d[fid] +
                        2.0 * (d[fid - 1] + d[fid + 1] + d[fid - fs] + d[fid + fs]) +
                        d[fid - fs - 1] + d[fid - fs + 1] + d[fid + fs - 1] +
                        d[fid + fs + 1];
      c.rhs[cid] = 0.25 * fw;
    }
  });
}

// Bilinear prolongation of the coarse correction, added into fine u.
void prolong_add(const MgLevel& c, MgLevel& f) {
  parallel_for(static_cast<std::size_t>(f.g.m) + 1, [&](std::size_t jz) {
    const int j = static_cast<int>(jz);
    const int cj = j / 2;
    const bool ej = (j % 2 == 0);
    for (int i = 0; i <= f.g.m; ++i) {
      const std::size_t id = f.g.at(i, j);
      if (f.g.kind[id] != kActive) continue;
      const int ci = i / 2;
      const bool ei = (i % 2 == 0);
      double v;
      if (ei && ej) {
        v = c.g.u[c.g.at(ci, cj)];
      } else if (!ei && ej) {
        v = 0.5 * (c.g.u[c.g.at(ci, cj)] + c.g.u[c.g.at(ci + 1, cj)]);
      } else if (ei) {
        v = 0.5 * (c.g.u[c.g.at(ci, cj)] + c.g.u[c.g.at(ci, cj + 1)]);
      } else {
        v = 0.25 * (c.g.u[c.g.at(ci, cj)] + c.g.u[c.g.at(ci + 1, cj)] +
                    c.g.u[c.g.at(ci, cj + 1)] + c.g.u[c.g.at(ci + 1, cj + 1)]);
      }
      f.g.u[id] += v;
    }
  });
}

void vcycle(std::vector<MgLevel>& lv, std::size_t l, double coarse_tol,
            long coarse_cap, long& sweeps) {
  if (l + 1 == lv.size()) {
    MgLevel& L = lv[l];
    const double omega = 2.0 / (1.0 + std::sin(M_PI / L.g.m));
    // The coarsest correction only needs a few percent relative accuracy;
    // the absolute floor keeps single-level runs honest.
    double target = coarse_tol;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t id = 0; id < L.rhs.size(); ++id)
        if (L.g.kind[id] == kActive) scale = std::max(scale, std::abs(L.rhs[id]));
      target = std::max(0.03 * 0.25 * scale, coarse_tol);
    }
    for (long k = 0; k < coarse_cap; ++k) {
      ++sweeps;
      if (smooth(L, omega) <= target) break;
    }
    return;
  }
  smooth(lv[l], 1.0);
  smooth(lv[l], 1.0);
  defect_pass(lv[l]);
  restrict_defect(lv[l], lv[l + 1]);
  vcycle(lv, l + 1, coarse_tol, coarse_cap, sweeps);
  prolong_add(lv[l + 1], lv[l]);
  smooth(lv[l], 1.0);
  smooth(lv[l], 1.0);
  sweeps += 4;
}

struct RunOutcome {
  FdGrid grid;
  bool converged = true;
  long sweeps = 0;
};

RunOutcome solve_run(const PlanarSet& X, int m, double R, double tol, long cap_opt) {
  // Every level must still resolve the narrowest feature of the target: a
  // level whose staircase holes are only a cell or two wide models a target
  // with the wrong effective size, and the correction it feeds back stalls
  // the cycle (or slowly inflates the iterate) instead of contracting it.
  const double feature = X.narrowest();
  std::vector<MgLevel> lv;
  lv.push_back(make_level(X, m, R));
  while (lv.back().g.m % 2 == 0 && lv.back().g.m > 96 &&
         4.0 * R / lv.back().g.m <= 0.5 * feature)
    lv.push_back(make_level(X, lv.back().g.m / 2, R));

  const long cycle_cap = cap_opt > 0 ? cap_opt : 100;
  const long coarse_cap = cap_opt > 0 ? cap_opt : 3L * lv.back().g.m + 4000;
  const double coarse_tol = 0.02 * tol;

  RunOutcome out;
  out.converged = false;
  for (long cycle = 0; cycle < cycle_cap; ++cycle) {
    vcycle(lv, 0, coarse_tol, coarse_cap, out.sweeps);
    const double res = defect_pass(lv.front());
    if (std::getenv("SZ_MG_TRACE"))
      std::fprintf(stderr, "m=%d R=%g cycle=%ld res=%.3e\n", m, R, cycle, res);
    if (res <= tol) {
      out.converged = true;
      break;
    }
  }
  out.grid = std::move(lv.front().g);
  return out;
}

double interp(const FdGrid& g, double x, double y) {
  const double fx = (x + g.R) / g.h;
  const double fy = (y + g.R) / g.h;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.m - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.m - 1);
  const double ax = std::clamp(fx - i, 0.0, 1.0);
  const double ay = std::clamp(fy - j, 0.0, 1.0);
  const double lo = (1.0 - ax) * g.u[g.at(i, j)] + ax * g.u[g.at(i + 1, j)];
  const double hi = (1.0 - ax) * g.u[g.at(i, j + 1)] + ax * g.u[g.at(i + 1, j + 1)];
  return (1.0 - ay) * lo + ay * hi;
}

}  // namespace

struct PdeField::Impl {
  PlanarSet planar;
  double R = 0.0;
  FdGrid fine;    // spacing h on [-R,R]^2
  FdGrid coarse;  // spacing 2h on [-R,R]^2
  FdGrid far;     // spacing 2h on [-2R,2R]^2
  bool converged = true;
  long sweeps = 0;
};

PdeField pde_solve(const SetGeometry& X, const PdeOptions& opts) {
  const PlanarSet planar = planar_of(X);
  require(opts.grid >= 16 && opts.grid % 4 == 0,
          "grid must be a multiple of 4, at least 16");
  require(std::isfinite(opts.residual_tol) && opts.residual_tol > 0.0,
          "residual tolerance must be positive");
  require(opts.max_sweeps >= 0, "sweep cap must be nonnegative");
  const double diam = X.diameter();
  const double R = opts.outer_radius == 0.0 ? 4.0 * diam : opts.outer_radius;
  require(std::isfinite(R) && R >= 4.0 * diam,
          "outer radius must be at least four target diameters");
  require(planar.reach() <= R / 2.0,
          "target must lie within half the outer radius of the origin");

  auto impl = std::make_shared<PdeField::Impl>();
  impl->planar = planar;
  impl->R = R;
  RunOutcome coarse = solve_run(planar, opts.grid / 2, R, opts.residual_tol, opts.max_sweeps);
  RunOutcome fine = solve_run(planar, opts.grid, R, opts.residual_tol, opts.max_sweeps);
  RunOutcome far = solve_run(planar, opts.grid, 2.0 * R, opts.residual_tol, opts.max_sweeps);
  impl->converged = coarse.converged && fine.converged && far.converged;
  impl->sweeps = coarse.sweeps + fine.sweeps + far.sweeps;
  impl->coarse = std::move(coarse.grid);
  impl->fine = std::move(fine.grid);
  impl->far = std::move(far.grid);

  PdeField field;
  field.impl_ = std::move(impl);
  return field;
}

PdeResult PdeField::at(cplx z) const {
  require(impl_ != nullptr, "field is empty");
  require(std::isfinite(z.real()) && std::isfinite(z.imag()),
          "point must be finite");
  const Impl& s = *impl_;
  PdeResult r;
  r.oracle.method = OracleMethod::pde;
  r.converged = s.converged;
  const double x = z.real(), y = z.imag();
  if (s.planar.margin(x, y) <= 0.0) return r;  // inside the closed target
  require(std::max(std::abs(x), std::abs(y)) <= s.R / 2.0,
          "point must lie within half the outer radius");

  r.value_fine = interp(s.fine, x, y);
  r.value_coarse = interp(s.coarse, x, y);
  r.value_far = interp(s.far, x, y);
  r.truncation_term = std::abs(r.value_coarse - r.value_far);
  r.discretization_term = std::abs(r.value_fine - r.value_coarse);
  const double bias =
      (r.value_coarse - r.value_far) * (std::log(2.0 * s.R) / std::log(2.0));
  r.oracle.value = std::max(r.value_fine - bias, 0.0);
  r.oracle.error_estimate = r.truncation_term + r.discretization_term;
  return r;
}

double PdeField::outer_radius() const {
  require(impl_ != nullptr, "field is empty");
  return impl_->R;
}

bool PdeField::converged() const {
  require(impl_ != nullptr, "field is empty");
  return impl_->converged;
}

long PdeField::sweeps() const {
  require(impl_ != nullptr, "field is empty");
  return impl_->sweeps;
}

PdeResult pde_green(const SetGeometry& X, cplx z, const PdeOptions& opts) {
  return pde_solve(X, opts).at(z);
}

// --------------------------------------------------------------------------
// Polynomial lower bounds
// --------------------------------------------------------------------------

namespace {

std::vector<cplx> roots_of_vars(const Eigen::VectorXd& x) {
  std::vector<cplx> roots(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t i = 0; i < roots.size(); ++i)
    roots[i] = cplx(x[2 * i], x[2 * i + 1]);
  return roots;
}

double log_abs_at(const std::vector<cplx>& roots, cplx w) {
  double acc = 0.0;
  for (const cplx& r : roots) acc += std::log(std::abs(w - r));
  return acc;
}

// Largest log|p| over the samples; -inf when p vanishes on all of them.
double log_max_on(const std::vector<cplx>& roots, const std::vector<cplx>& K) {
  double best = -kInf;
  for (const cplx& k : K) best = std::max(best, log_abs_at(roots, k));
  return best;
}

// Seed 1: roots at greedy k-center / Lloyd cluster centers of the samples.
std::vector<cplx> cluster_seed(const std::vector<cplx>& K, int d) {
  cplx centroid = 0.0;
  for (const cplx& k : K) centroid += k;
  centroid /= static_cast<double>(K.size());

  std::vector<cplx> centers;
  centers.reserve(d);
  std::size_t first = 0;
  double best = -1.0;
  for (std::size_t m = 0; m < K.size(); ++m) {
    const double dist = std::abs(K[m] - centroid);
    if (dist > best) {
      best = dist;
      first = m;
    }
  }
  centers.push_back(K[first]);
  while (static_cast<int>(centers.size()) < d) {
    std::size_t pick = 0;
    double far = -1.0;
    for (std::size_t m = 0; m < K.size(); ++m) {
      double near = kInf;
      for (const cplx& c : centers) near = std::min(near, std::abs(K[m] - c));
      if (near > far) {
        far = near;
        pick = m;
      }
    }
    centers.push_back(K[pick]);
  }
  for (int round = 0; round < 30; ++round) {
    std::vector<cplx> sum(centers.size(), 0.0);
    std::vector<std::size_t> count(centers.size(), 0);
    for (const cplx& k : K) {
      std::size_t arg = 0;
      double near = kInf;
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dist = std::abs(k - centers[c]);
        if (dist < near) {
          near = dist;
          arg = c;
        }
      }
      sum[arg] += k;
      ++count[arg];
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
      if (count[c] > 0) centers[c] = sum[c] / static_cast<double>(count[c]);
  }
  return centers;
}

// Seed 2: Leja points of the sample set (greedy max-product).
std::vector<cplx> leja_seed(const std::vector<cplx>& K, int d) {
  cplx centroid = 0.0;
  for (const cplx& k : K) centroid += k;
  centroid /= static_cast<double>(K.size());

  std::vector<cplx> pts;
  pts.reserve(d);
  std::size_t first = 0;
  double best = -1.0;
  for (std::size_t m = 0; m < K.size(); ++m) {
    const double dist = std::abs(K[m] - centroid);
    if (dist > best) {
      best = dist;
      first = m;
    }
  }
  pts.push_back(K[first]);
  while (static_cast<int>(pts.size()) < d) {
    std::size_t pick = 0;
    double far = -kInf;
    for (std::size_t m = 0; m < K.size(); ++m) {
      const double pot = log_abs_at(pts, K[m]);
      if (pot > far) {
        far = pot;
        pick = m;
      }
    }
    pts.push_back(K[pick]);
  }
  return pts;
}

// Seed 3: Chebyshev points on the principal segment of the samples.
std::vector<cplx> chebyshev_seed(const std::vector<cplx>& K, int d) {
  double mx = 0.0, my = 0.0;
  for (const cplx& k : K) {
    mx += k.real();
    my += k.imag();
  }
  mx /= static_cast<double>(K.size());
  my /= static_cast<double>(K.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const cplx& k : K) {
    const double dx = k.real() - mx, dy = k.imag() - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  Eigen::Matrix2d cov;
  cov << sxx, sxy, sxy, syy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);  // largest eigenvalue
  const cplx dir(axis[0], axis[1]);
  const cplx mean(mx, my);
  double tmin = kInf, tmax = -kInf;
  for (const cplx& k : K) {
    const double t = (k.real() - mx) * axis[0] + (k.imag() - my) * axis[1];
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  const double mid = 0.5 * (tmin + tmax), half = 0.5 * (tmax - tmin);
  std::vector<cplx> pts(d);
  for (int j = 0; j < d; ++j) {
    const double t = mid + half * std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * d));
    pts[static_cast<std::size_t>(j)] = mean + dir * t;
  }
  return pts;
}

Eigen::VectorXd vars_of_roots(const std::vector<cplx>& roots) {
  Eigen::VectorXd x(2 * static_cast<Eigen::Index>(roots.size()));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    x[2 * i] = roots[i].real();
    x[2 * i + 1] = roots[i].imag();
  }
  return x;
}

Eigen::VectorXcd coefficients_of(const std::vector<cplx>& roots) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
  c[0] = 1.0;
  Eigen::Index top = 0;
  for (const cplx& r : roots) {
    ++top;
    for (Eigen::Index k = top; k >= 1; --k) c[k] = (k == top ? cplx(0.0) : c[k]) * (-r) + c[k - 1];
    c[0] *= -r;
  }
  return c;
}

}  // namespace

PolyLowerResult poly_lower(const std::vector<cplx>& K, cplx z, int degree,
                           const PolyLowerOptions& opts) {
  require(!K.empty(), "sample set must be nonempty");
  for (const cplx& k : K)
    require(std::isfinite(k.real()) && std::isfinite(k.imag()),
            "samples must be finite");
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "point must be finite");
  require(degree >= 1, "degree must be at least 1");
  require(opts.budget >= 1, "budget must be at least 1");
  require(opts.max_iter >= 1, "max_iter must be at least 1");

  const int d = degree;
  const double inv_d = 1.0 / static_cast<double>(d);
  const auto objective = [&](const Eigen::VectorXd& x) {
    const std::vector<cplx> roots = roots_of_vars(x);
    const double lp_z = log_abs_at(roots, z);
    if (lp_z == -kInf) return kInf;  // a root sits on the query point
    const double lp_k = log_max_on(roots, K);
    if (lp_k == -kInf) return -kInf;  // vanishes on every sample: separation
    return -inv_d * (lp_z - lp_k);
  };

  cplx centroid = 0.0;
  for (const cplx& k : K) centroid += k;
  centroid /= static_cast<double>(K.size());
  double scale = std::abs(z - centroid);
  for (const cplx& k : K) scale = std::max(scale, std::abs(k - centroid));
  scale = std::max(scale, 1e-3);

  const std::vector<std::vector<cplx>> seeds = {
      cluster_seed(K, d), leja_seed(K, d), chebyshev_seed(K, d)};

  SimplexOptions nm;
  nm.max_iter = opts.max_iter;
  nm.initial_step = 0.12 * scale;
  nm.x_tol = 1e-9 * scale;
  nm.f_tol = 1e-12;

  const int restarts = opts.budget;
  std::vector<SimplexResult> found(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    std::vector<cplx> start = seeds[r % seeds.size()];
    if (r >= seeds.size()) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(opts.seed) * 1000003u + r);
      std::normal_distribution<double> noise(0.0, (0.05 + 0.30 * (r % 7) / 6.0) * scale);
      for (cplx& w : start) w += cplx(noise(rng), noise(rng));
    }
    found[r] = nelder_mead(objective, vars_of_roots(start), nm);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < found.size(); ++r)
    if (found[r].value < found[best].value) best = r;

  // Polish the winner with a tighter simplex.
  if (std::isfinite(found[best].value)) {
    SimplexOptions fine = nm;
    fine.initial_step = 0.02 * scale;
    const SimplexResult polished = nelder_mead(objective, found[best].x, fine);
    if (polished.value < found[best].value) found[best] = polished;
  }

  const std::vector<cplx> roots = roots_of_vars(found[best].x);
  PolyLowerResult out;
  out.coefficients = coefficients_of(roots);
  out.oracle.method = OracleMethod::poly_lower;
  out.oracle.error_estimate = 0.0;

  // Certify from the coefficient evaluation (the reported certificate).
  const Polynomial p(out.coefficients);
  double max_k = 0.0;
  for (const cplx& k : K) max_k = std::max(max_k, std::abs(p.eval(k)));
  const double at_z = std::abs(p.eval(z));
  if (max_k == 0.0) {
    out.separation = at_z > 0.0;
    out.oracle.value = out.separation ? kInf : -kInf;
  } else if (at_z == 0.0) {
    out.oracle.value = -kInf;
  } else {
    out.oracle.value = inv_d * (std::log(at_z) - std::log(max_k));
  }
  return out;
}

}  // namespace sz
