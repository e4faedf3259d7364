#include "sz/boundary.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sz {

namespace {

double wrap_angle(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

cplx pow_int(cplx b, int e) {
  cplx acc = 1.0;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

Eigen::VectorXcd fourier_coefficients(const Eigen::ArrayXd& samples) {
  const Eigen::Index n = samples.size();
  Eigen::VectorXcd in(n), out(n);
  for (Eigen::Index k = 0; k < n; ++k) in[k] = samples[k];
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return out / static_cast<double>(n);
}

}  // namespace

BoundaryGrid::BoundaryGrid(Eigen::ArrayXd s) : samples(std::move(s)) {
  if (!valid_size(samples.size()))
    throw std::invalid_argument("BoundaryGrid: size must be a power of two >= 8");
  if (!samples.isFinite().all())
    throw std::invalid_argument("BoundaryGrid: samples must be finite");
}

Eigen::ArrayXd grid_angles(int n) {
  Eigen::ArrayXd a(n);
  for (int k = 0; k < n; ++k) a[k] = kTwoPi * k / n;
  return a;
}

Eigen::VectorXcd analytic_completion(const BoundaryGrid& u) {
  const int n = u.size();
  Eigen::VectorXcd c = fourier_coefficients(u.samples);
  Eigen::VectorXcd g(n / 2 + 1);
  g[0] = c[0].real();
  for (int k = 1; k < n / 2; ++k) g[k] = 2.0 * c[k];
  g[n / 2] = c[n / 2].real();
  return g;
}

double poisson_value(const BoundaryGrid& u, cplx z) {
  if (std::abs(z) > 1.0 - 1e-12)
    throw std::invalid_argument("poisson_value: |z| must be <= 1 - 1e-12");
  return horner(analytic_completion(u), z).real();
}

BoundaryGrid conjugate_grid(const BoundaryGrid& u) {
  const Eigen::Index n = u.samples.size();
  Eigen::VectorXcd in(n), freq(n), back(n);
  for (Eigen::Index k = 0; k < n; ++k) in[k] = u.samples[k];
  Eigen::FFT<double> fft;
  fft.fwd(freq, in);
  const cplx mi(0.0, -1.0), pi_(0.0, 1.0);
  freq[0] = 0.0;
  freq[n / 2] = 0.0;
  for (Eigen::Index k = 1; k < n / 2; ++k) freq[k] *= mi;
  for (Eigen::Index k = n / 2 + 1; k < n; ++k) freq[k] *= pi_;
  fft.inv(back, freq);
  Eigen::ArrayXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = back[k].real();
  return BoundaryGrid(out);
}

AtomicMeasure AtomicMeasure::from(std::vector<Atom> raw) {
  for (const auto& a : raw) {
    if (!std::isfinite(a.angle) || !std::isfinite(a.mass))
      throw std::invalid_argument("AtomicMeasure: non-finite atom");
    if (a.mass <= 0.0) throw std::invalid_argument("AtomicMeasure: mass must be positive");
  }
  for (auto& a : raw) a.angle = wrap_angle(a.angle);
  std::sort(raw.begin(), raw.end(),
            [](const Atom& x, const Atom& y) { return x.angle < y.angle; });
  AtomicMeasure m;
  for (const auto& a : raw) {
    if (!m.atoms.empty() && m.atoms.back().angle == a.angle)
      m.atoms.back().mass += a.mass;
    else
      m.atoms.push_back(a);
  }
  return m;
}

double AtomicMeasure::total() const {
  double t = 0.0;
  for (const auto& a : atoms) t += a.mass;
  return t;
}

double AtomicMeasure::mass_at(double angle) const {
  for (const auto& a : atoms)
    if (a.angle == angle) return a.mass;
  return 0.0;
}

AtomicMeasure measure_join(const std::vector<AtomicMeasure>& ms) {
  std::map<double, double> acc;
  for (const auto& m : ms)
    for (const auto& a : m.atoms) {
      auto [it, fresh] = acc.emplace(a.angle, a.mass);
      if (!fresh) it->second = std::max(it->second, a.mass);
    }
  AtomicMeasure out;
  for (const auto& [angle, mass] : acc) out.atoms.push_back({angle, mass});
  return out;
}

AtomicMeasure measure_meet(const std::vector<AtomicMeasure>& ms) {
  if (ms.empty()) return {};
  std::map<double, double> acc;
  for (const auto& a : ms[0].atoms) acc.emplace(a.angle, a.mass);
  for (std::size_t i = 1; i < ms.size(); ++i) {
    std::map<double, double> next;
    for (const auto& a : ms[i].atoms) {
      auto it = acc.find(a.angle);
      if (it != acc.end()) next.emplace(a.angle, std::min(it->second, a.mass));
    }
    acc.swap(next);
  }
  AtomicMeasure out;
  for (const auto& [angle, mass] : acc) out.atoms.push_back({angle, mass});
  return out;
}

AtomicMeasure measure_add(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::vector<AtomicMeasure::Atom> all = a.atoms;
  all.insert(all.end(), b.atoms.begin(), b.atoms.end());
  return AtomicMeasure::from(std::move(all));
}

AtomicMeasure measure_subtract(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::map<double, double> acc;
  for (const auto& x : a.atoms) acc.emplace(x.angle, x.mass);
  for (const auto& x : b.atoms) {
    auto it = acc.find(x.angle);
    if (it == acc.end() || it->second < x.mass - 1e-15)
      throw std::invalid_argument("measure_subtract: subtrahend not dominated");
    it->second -= x.mass;
  }
  AtomicMeasure out;
  for (const auto& [angle, mass] : acc)
    if (mass > 0.0) out.atoms.push_back({angle, mass});
  return out;
}

cplx singular_eval(const AtomicMeasure& mu, cplx z) {
  if (std::abs(z) >= 1.0)
    throw std::invalid_argument("singular_eval: |z| must be < 1");
  cplx s = 0.0;
  for (const auto& a : mu.atoms) {
    cplx zeta = std::polar(1.0, a.angle);
    s += a.mass * (z + zeta) / (z - zeta);
  }
  return std::exp(s);
}

BlaschkeData BlaschkeData::from(std::vector<Zero> raw) {
  for (const auto& z : raw) {
    if (!(std::abs(z.a) < 1.0))
      throw std::invalid_argument("BlaschkeData: zeros must lie in the open disc");
    if (z.mult < 1) throw std::invalid_argument("BlaschkeData: multiplicity must be >= 1");
  }
  std::sort(raw.begin(), raw.end(), [](const Zero& x, const Zero& y) {
    if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
    return x.a.imag() < y.a.imag();
  });
  BlaschkeData b;
  for (const auto& z : raw) {
    if (!b.zeros.empty() && b.zeros.back().a == z.a)
      b.zeros.back().mult += z.mult;
    else
      b.zeros.push_back(z);
  }
  return b;
}

int BlaschkeData::total_mult() const {
  int t = 0;
  for (const auto& z : zeros) t += z.mult;
  return t;
}

cplx blaschke_eval(const BlaschkeData& b, cplx z) {
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("blaschke_eval: |z| must be <= 1");
  cplx acc = 1.0;
  for (const auto& zero : b.zeros) {
    cplx factor;
    if (zero.a == cplx(0.0, 0.0))
      factor = z;
    else
      factor = (std::abs(zero.a) / zero.a) * (zero.a - z) / (1.0 - std::conj(zero.a) * z);
    acc *= pow_int(factor, zero.mult);
  }
  return acc;
}

LogAbs0 blaschke_log_abs0(const BlaschkeData& b) {
  LogAbs0 r;
  for (const auto& z : b.zeros) {
    if (z.a == cplx(0.0, 0.0)) {
      r.zero_at_origin = true;
      continue;
    }
    r.log_abs += z.mult * std::log(std::abs(z.a));
  }
  return r;
}

BlaschkeData blaschke_gcd(const std::vector<BlaschkeData>& bs) {
  if (bs.empty()) return {};
  BlaschkeData g;
  for (const auto& zero : bs[0].zeros) {
    int m = zero.mult;
    for (std::size_t i = 1; i < bs.size() && m > 0; ++i) {
      int mi = 0;
      for (const auto& w : bs[i].zeros)
        if (w.a == zero.a) mi = w.mult;
      m = std::min(m, mi);
    }
    if (m > 0) g.zeros.push_back({zero.a, m});
  }
  return g;
}

BlaschkeData blaschke_divide(const BlaschkeData& b, const BlaschkeData& divisor) {
  BlaschkeData out;
  for (const auto& zero : b.zeros) {
    int m = zero.mult;
    for (const auto& d : divisor.zeros)
      if (d.a == zero.a) m -= d.mult;
    if (m < 0) throw std::invalid_argument("blaschke_divide: divisor not a factor");
    if (m > 0) out.zeros.push_back({zero.a, m});
  }
  for (const auto& d : divisor.zeros) {
    bool present = false;
    for (const auto& zero : b.zeros) present = present || zero.a == d.a;
    if (!present) throw std::invalid_argument("blaschke_divide: divisor not a factor");
  }
  return out;
}

OuterSpec OuterSpec::one() { return {}; }

OuterSpec OuterSpec::rational(Polynomial num, Polynomial den) {
  if (num.is_zero() || den.is_zero())
    throw std::invalid_argument("OuterSpec: rational parts must be nonzero");
  std::vector<cplx> nr = num.roots(), dr = den.roots();
  for (const auto& r : nr)
    if (std::abs(r) < 1.0 - 1e-10)
      throw std::invalid_argument("OuterSpec: numerator vanishes on the open disc");
  for (const auto& r : dr)
    if (std::abs(r) < 1.0 - 1e-10)
      throw std::invalid_argument("OuterSpec: denominator vanishes on the open disc");
  for (const auto& rn : nr)
    for (const auto& rd : dr)
      if (std::abs(rn - rd) < 1e-8)
        throw std::invalid_argument("OuterSpec: numerator and denominator share a root");
  OuterSpec h;
  h.has_rational = true;
  h.num = std::move(num);
  h.den = std::move(den);
  return h;
}

OuterSpec OuterSpec::grid(const BoundaryGrid& w) {
  OuterSpec h;
  h.has_grid = true;
  h.grid_log_mod = w.samples;
  h.grid_completion = analytic_completion(w);
  return h;
}

cplx OuterSpec::eval(cplx z) const {
  cplx v = 1.0;
  if (has_rational) v *= num.eval(z) / den.eval(z);
  if (has_grid) v *= std::exp(horner(grid_completion, z));
  return v;
}

double OuterSpec::log_abs0() const {
  double v = 0.0;
  if (has_rational) v += std::log(std::abs(num.eval(0.0))) - std::log(std::abs(den.eval(0.0)));
  if (has_grid) v += grid_completion[0].real();
  return v;
}

bool OuterSpec::bounded() const {
  if (has_rational)
    for (const auto& r : den.roots())
      if (std::abs(r) < 1.0 + 1e-9) return false;
  return true;
}

OuterSpec OuterSpec::times(const OuterSpec& other) const {
  OuterSpec h;
  h.has_rational = has_rational || other.has_rational;
  if (h.has_rational) {
    h.num = has_rational ? (other.has_rational ? num.times(other.num) : num)
                         : other.num;
    h.den = has_rational ? (other.has_rational ? den.times(other.den) : den)
                         : other.den;
  }
  h.has_grid = has_grid || other.has_grid;
  if (has_grid && other.has_grid) {
    if (grid_log_mod.size() != other.grid_log_mod.size())
      throw std::invalid_argument("OuterSpec::times: grid sizes differ");
    h.grid_log_mod = grid_log_mod + other.grid_log_mod;
    h.grid_completion = grid_completion + other.grid_completion;
  } else if (has_grid) {
    h.grid_log_mod = grid_log_mod;
    h.grid_completion = grid_completion;
  } else if (other.has_grid) {
    h.grid_log_mod = other.grid_log_mod;
    h.grid_completion = other.grid_completion;
  }
  return h;
}

std::pair<OuterSpec, OuterSpec> OuterSpec::split_uv() const {
  OuterSpec u, v;
  if (has_rational) {
    u.has_rational = true;
    u.num = num;
    v.has_rational = true;
    v.num = den;
  }
  if (has_grid) {
    Eigen::ArrayXd plus = grid_log_mod.max(0.0), minus = (-grid_log_mod).max(0.0);
    if (!plus.isFinite().all() || !minus.isFinite().all())
      throw std::invalid_argument("OuterSpec::split_uv: grid log-modulus unbounded");
    u.has_grid = true;
    u.grid_log_mod = plus;
    u.grid_completion = analytic_completion(BoundaryGrid(plus));
    v.has_grid = true;
    v.grid_log_mod = minus;
    v.grid_completion = analytic_completion(BoundaryGrid(minus));
  }
  return {u, v};
}

OuterFunction outer_from_log_modulus(const BoundaryGrid& w) {
  return OuterFunction{analytic_completion(w)};
}

Arc Arc::from_angles(double start, double end) {
  if (!std::isfinite(start) || !std::isfinite(end))
    throw std::invalid_argument("Arc: angles must be finite");
  double raw = end - start;
  double length;
  if (std::abs(raw - kTwoPi) <= 1e-12)
    length = kTwoPi;
  else {
    length = wrap_angle(raw);
    if (length <= 1e-12)
      throw std::invalid_argument("Arc: degenerate arc");
  }
  Arc a;
  a.start = wrap_angle(start);
  a.end = a.start + length;
  return a;
}

Arc Arc::full_circle() {
  Arc a;
  a.start = 0.0;
  a.end = kTwoPi;
  return a;
}

double Arc::midpoint() const {
  double m = start + 0.5 * length();
  return m >= kTwoPi ? m - kTwoPi : m;
}

bool Arc::contains(double theta) const {
  if (full()) return true;
  double d = std::fmod(theta - start, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d < length();
}

bool Arc::strictly_inside(double theta) const {
  if (full()) return true;
  double d = std::fmod(theta - start, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d > 0.0 && d < length();
}

HarmonicMeasure harmonic_measure_arc(const Arc& a, cplx z) {
  if (std::abs(z) >= 1.0)
    throw std::invalid_argument("harmonic_measure_arc: |z| must be < 1");
  if (a.full()) return {1.0, cplx(1.0, 0.0)};
  const cplx z1 = std::polar(1.0, a.start), z2 = std::polar(1.0, a.end);
  // W = (1/2pi)(2*darg - dphi) - (i/pi)(log|z2-z| - log|z1-z|), where darg is
  // the continuous increment of arg(zeta - z) along the arc; it lies in
  // (0, 2pi), so the principal value is corrected by +2pi when nonpositive.
  double darg = std::arg((z2 - z) / (z1 - z));
  if (darg <= 0.0) darg += kTwoPi;
  double omega = (2.0 * darg - a.length()) / kTwoPi;
  omega = std::clamp(omega, 0.0, 1.0);
  double im = -(std::log(std::abs(z2 - z)) - std::log(std::abs(z1 - z))) / kPi;
  return {omega, cplx(omega, im)};
}

HarmonicMeasure harmonic_measure_arc_boundary(const Arc& a, double theta) {
  if (a.full()) return {1.0, cplx(1.0, 0.0)};
  double d = std::fmod(theta - a.start, kTwoPi);
  if (d < 0) d += kTwoPi;
  if (d < 1e-12 || std::abs(d - a.length()) < 1e-12)
    throw std::invalid_argument("harmonic_measure_arc_boundary: endpoint angle");
  double omega = d < a.length() ? 1.0 : 0.0;
  double im = (std::log(std::abs(std::sin(0.5 * (theta - a.start)))) -
               std::log(std::abs(std::sin(0.5 * (theta - a.end))))) /
              kPi;
  return {omega, cplx(omega, im)};
}

}  // namespace sz
