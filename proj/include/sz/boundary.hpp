#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "sz/polynomial.hpp"

namespace sz {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr int kDefaultGrid = 1 << 14;

inline cplx horner(const Eigen::VectorXcd& g, cplx z) {
  cplx acc = g[g.size() - 1];
  for (Eigen::Index k = g.size() - 2; k >= 0; --k) acc = acc * z + g[k];
  return acc;
}

// Real samples at the N-th roots of unity, N a power of two >= 8.
struct BoundaryGrid {
  Eigen::ArrayXd samples;

  explicit BoundaryGrid(Eigen::ArrayXd s);
  int size() const { return static_cast<int>(samples.size()); }
  double angle(int k) const { return kTwoPi * k / size(); }
  static bool valid_size(Eigen::Index n) {
    return n >= 8 && (n & (n - 1)) == 0;
  }
};

Eigen::ArrayXd grid_angles(int n);

// Coefficients g_0..g_{N/2} of the holomorphic completion G with
// Re G = harmonic extension of u and Im G(0) = 0.
Eigen::VectorXcd analytic_completion(const BoundaryGrid& u);

double poisson_value(const BoundaryGrid& u, cplx z);
BoundaryGrid conjugate_grid(const BoundaryGrid& u);

// Finite positive atomic measure on the circle; angles in [0, 2pi), strictly
// increasing. Construction merges duplicate angles by adding masses.
struct AtomicMeasure {
  struct Atom {
    double angle;
    double mass;
  };
  std::vector<Atom> atoms;

  AtomicMeasure() = default;
  static AtomicMeasure from(std::vector<Atom> raw);
  double total() const;
  bool empty() const { return atoms.empty(); }
  double mass_at(double angle) const;
};

AtomicMeasure measure_join(const std::vector<AtomicMeasure>& ms);
AtomicMeasure measure_meet(const std::vector<AtomicMeasure>& ms);
AtomicMeasure measure_add(const AtomicMeasure& a, const AtomicMeasure& b);
// Per-angle difference a - b; requires b <= a atomwise (exact angles).
AtomicMeasure measure_subtract(const AtomicMeasure& a, const AtomicMeasure& b);

cplx singular_eval(const AtomicMeasure& mu, cplx z);

// Finite Blaschke data; each factor (|a|/a)(a-z)/(1-conj(a)z), factor z when
// a = 0, so the value at 0 is the positive number prod |a_k|^{m_k}.
struct BlaschkeData {
  struct Zero {
    cplx a;
    int mult;
  };
  std::vector<Zero> zeros;

  BlaschkeData() = default;
  static BlaschkeData from(std::vector<Zero> raw);
  bool empty() const { return zeros.empty(); }
  int total_mult() const;
};

cplx blaschke_eval(const BlaschkeData& b, cplx z);

struct LogAbs0 {
  bool zero_at_origin = false;
  double log_abs = 0.0;  // sum of mult*log|a|; meaningful only when finite
};
LogAbs0 blaschke_log_abs0(const BlaschkeData& b);

// Zeros shared (exact complex equality) by every entry, with the minimum
// multiplicity; the lattice gcd used by the I reduction.
BlaschkeData blaschke_gcd(const std::vector<BlaschkeData>& bs);
BlaschkeData blaschke_divide(const BlaschkeData& b, const BlaschkeData& divisor);

// Outer data: optional rational part num/den (both zero-free on the open
// disc) and optional grid log-modulus part. Canonical single-part values come
// from the factories; two-part products arise only in lifted components.
struct OuterSpec {
  bool has_rational = false;
  Polynomial num = Polynomial::constant(1.0);
  Polynomial den = Polynomial::constant(1.0);
  bool has_grid = false;
  Eigen::ArrayXd grid_log_mod;      // boundary samples of log|h|
  Eigen::VectorXcd grid_completion; // cached completion of grid_log_mod

  static OuterSpec one();
  static OuterSpec rational(Polynomial num, Polynomial den);
  static OuterSpec grid(const BoundaryGrid& w);

  cplx eval(cplx z) const;
  double log_abs0() const;   // log|h(0)| (exact for rational, mean for grid)
  bool bounded() const;      // no den roots on the closed disc; grid part finite
  bool trivial() const { return !has_rational && !has_grid; }
  OuterSpec times(const OuterSpec& other) const;
  // h = u/v with u, v bounded outer: rational num/den, grid +/- parts.
  std::pair<OuterSpec, OuterSpec> split_uv() const;
};

// Evaluable outer function exp(G) built from boundary log-modulus; G(0) real.
struct OuterFunction {
  Eigen::VectorXcd g;
  cplx eval(cplx z) const { return std::exp(horner(g, z)); }
  cplx log_eval(cplx z) const { return horner(g, z); }
};
OuterFunction outer_from_log_modulus(const BoundaryGrid& w);

// Counterclockwise arc from angle start to angle end; length in (0, 2pi].
struct Arc {
  double start;  // normalized into [0, 2pi)
  double end;    // start < end <= start + 2pi

  static Arc from_angles(double start, double end);
  static Arc full_circle();
  double length() const { return end - start; }
  double fraction() const { return length() / kTwoPi; }
  bool full() const { return length() >= kTwoPi - 1e-12; }
  double midpoint() const;
  bool contains(double theta) const;          // half-open [start, end)
  bool strictly_inside(double theta) const;   // open interior
};

struct HarmonicMeasure {
  double omega;  // harmonic measure of the arc, in [0, 1]
  cplx W;        // holomorphic completion, Re W = omega, Im W(0) = 0
};

HarmonicMeasure harmonic_measure_arc(const Arc& a, cplx z);
// Nontangential boundary limit at exp(i*theta); theta must avoid endpoints.
HarmonicMeasure harmonic_measure_arc_boundary(const Arc& a, double theta);

}  // namespace sz
