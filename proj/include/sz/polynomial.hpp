#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <vector>

namespace sz {

using cplx = std::complex<double>;

// Dense polynomial with ascending complex coefficients.
struct Polynomial {
  Eigen::VectorXcd c;

  Polynomial() : c(Eigen::VectorXcd::Zero(1)) {}
  explicit Polynomial(Eigen::VectorXcd coeffs) : c(std::move(coeffs)) {
    if (c.size() == 0) c = Eigen::VectorXcd::Zero(1);
  }
  static Polynomial constant(cplx v) {
    Eigen::VectorXcd k(1);
    k[0] = v;
    return Polynomial(k);
  }

  cplx eval(cplx z) const {
    cplx acc = c[c.size() - 1];
    for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * z + c[k];
    return acc;
  }

  // Index of the highest coefficient that survives the relative trim.
  Eigen::Index top_index(double rel_tol = 1e-12) const {
    double scale = c.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0;
    Eigen::Index top = 0;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      if (std::abs(c[k]) > rel_tol * scale) top = k;
    return top;
  }

  int degree() const { return static_cast<int>(top_index()); }

  bool is_zero() const { return c.cwiseAbs().maxCoeff() == 0.0; }

  Polynomial times(const Polynomial& other) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c.size() + other.c.size() - 1);
    for (Eigen::Index i = 0; i < c.size(); ++i)
      for (Eigen::Index j = 0; j < other.c.size(); ++j) out[i + j] += c[i] * other.c[j];
    return Polynomial(out);
  }

  // Companion-matrix roots of the trimmed polynomial.
  std::vector<cplx> roots() const {
    Eigen::Index top = top_index();
    if (top == 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(top, top);
    for (Eigen::Index i = 1; i < top; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < top; ++i) comp(i, top - 1) = -c[i] / c[top];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> out(static_cast<std::size_t>(top));
    for (Eigen::Index i = 0; i < top; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
  }
};

}  // namespace sz
