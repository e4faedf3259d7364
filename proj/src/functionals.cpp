#include "sz/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sz/threads.hpp"

namespace sz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Reduction {
  BlaschkeData zeroth_blaschke;  // zeroth Blaschke data over the gcd
  AtomicMeasure zeroth_sing;     // zeroth singular measure over the meet
  BlaschkeData gcd;
  AtomicMeasure meet;
};

Reduction reduce(const LiftedDisc& d) {
  std::vector<BlaschkeData> bs;
  std::vector<AtomicMeasure> ms;
  bs.reserve(d.components.size());
  ms.reserve(d.components.size());
  for (const auto& c : d.components) {
    bs.push_back(c.blaschke);
    ms.push_back(c.sing_num);
  }
  Reduction r;
  r.gcd = blaschke_gcd(bs);
  r.meet = measure_meet(ms);
  r.zeroth_blaschke = blaschke_divide(d.zeroth().blaschke, r.gcd);
  r.zeroth_sing = measure_subtract(d.zeroth().sing_num, r.meet);
  return r;
}

void fill_removed(FunctionalValue& v, const Reduction& r) {
  LogAbs0 g = blaschke_log_abs0(r.gcd);
  v.detail.removed_blaschke = g.zero_at_origin ? kInf : -g.log_abs;
  v.detail.removed_singular = r.meet.total();
}

double serial_mean(const std::vector<double>& vals) {
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum / static_cast<double>(vals.size());
}

}  // namespace

FunctionalValue J_of(const LiftedDisc& d) {
  const Reduction r = reduce(d);
  FunctionalValue v;
  v.method = FunctionalMethod::exact;
  fill_removed(v, r);
  v.detail.removed_singular = 0.0;  // J never touches the singular parts
  const LogAbs0 la = blaschke_log_abs0(r.zeroth_blaschke);
  if (la.zero_at_origin) {
    v.infinite = true;
    v.value = kInf;
    return v;
  }
  v.detail.blaschke_part = -la.log_abs;
  v.value = v.detail.blaschke_part;
  return v;
}

FunctionalValue J_of(const ClosedPolyLift& d) {
  FunctionalValue v;
  v.method = FunctionalMethod::exact;
  const Polynomial& p0 = d.zeroth();
  if (p0.c[0] == 0.0) {
    v.infinite = true;
    v.value = kInf;
    return v;
  }
  double sum = 0.0;
  for (cplx root : p0.roots())
    if (std::abs(root) < 1.0) sum -= std::log(std::abs(root));
  v.detail.blaschke_part = sum;
  v.value = sum;
  return v;
}

FunctionalValue I_of(const LiftedDisc& d) {
  const Reduction r = reduce(d);
  FunctionalValue v;
  v.method = FunctionalMethod::exact;
  fill_removed(v, r);
  const LogAbs0 la = blaschke_log_abs0(r.zeroth_blaschke);
  if (la.zero_at_origin) {
    v.infinite = true;
    v.value = kInf;
    return v;
  }
  v.detail.blaschke_part = -la.log_abs;
  v.detail.singular_part = r.zeroth_sing.total();
  v.value = v.detail.blaschke_part + v.detail.singular_part;
  return v;
}

FunctionalValue I_of_quadrature(const LiftedDisc& d, int grid) {
  if (!BoundaryGrid::valid_size(grid))
    throw std::invalid_argument("grid must be a power of two, at least 8");
  const Reduction r = reduce(d);
  FunctionalValue v;
  v.method = FunctionalMethod::quadrature;
  fill_removed(v, r);
  const LogAbs0 la = blaschke_log_abs0(r.zeroth_blaschke);
  if (la.zero_at_origin) {
    v.infinite = true;
    v.value = kInf;
    return v;
  }
  const OuterSpec& outer = d.zeroth().outer;
  const double radius = 1.0 - 1e-12;
  std::vector<double> vals(static_cast<std::size_t>(grid));
  parallel_for(vals.size(), [&](std::size_t i) {
    const cplx z = std::polar(radius, kTwoPi * static_cast<double>(i) / grid);
    vals[i] = std::log(std::abs(blaschke_eval(r.zeroth_blaschke, z) * outer.eval(z)));
  });
  const double at0 =
      std::log(std::abs(blaschke_eval(r.zeroth_blaschke, 0.0) * outer.eval(0.0) *
                        singular_eval(r.zeroth_sing, 0.0)));
  v.value = std::max(0.0, serial_mean(vals) - at0);
  return v;
}

FunctionalValue nu_of(const FactoredDisc& f) {
  std::vector<AtomicMeasure> dens;
  dens.reserve(f.components.size());
  for (const auto& c : f.components) dens.push_back(c.sing_den);
  FunctionalValue v;
  v.method = FunctionalMethod::exact;
  v.detail.singular_part = measure_join(dens).total();
  v.value = v.detail.singular_part;
  return v;
}

std::vector<double> J_via_riesz(const LiftedDisc& d,
                                const std::vector<double>& radii, int grid) {
  if (!BoundaryGrid::valid_size(grid))
    throw std::invalid_argument("grid must be a power of two, at least 8");
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0 && r >= prev))
      throw std::invalid_argument("radii must be nondecreasing inside (0, 1)");
    prev = r;
  }
  const Reduction red = reduce(d);
  const LogAbs0 la = blaschke_log_abs0(red.zeroth_blaschke);
  std::vector<double> out(radii.size(), kInf);
  if (la.zero_at_origin) return out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::vector<double> vals(static_cast<std::size_t>(grid));
    parallel_for(vals.size(), [&](std::size_t i) {
      const cplx z =
          std::polar(radii[k], kTwoPi * static_cast<double>(i) / grid);
      vals[i] = std::log(std::abs(blaschke_eval(red.zeroth_blaschke, z)));
    });
    out[k] = serial_mean(vals) - la.log_abs;
  }
  return out;
}

int winding_count(const Polynomial& p, double radius, int grid) {
  if (!BoundaryGrid::valid_size(grid))
    throw std::invalid_argument("grid must be a power of two, at least 8");
  if (!(std::isfinite(radius) && radius > 0.0))
    throw std::invalid_argument("radius must be positive");
  cplx prev = p.eval(radius);
  if (prev == 0.0)
    throw std::invalid_argument("polynomial vanishes on the sampling circle");
  double total = 0.0;
  for (int k = 1; k <= grid; ++k) {
    const cplx cur = p.eval(std::polar(radius, kTwoPi * k / grid));
    if (cur == 0.0)
      throw std::invalid_argument("polynomial vanishes on the sampling circle");
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace sz
