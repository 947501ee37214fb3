#include "sgdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgdg {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev initial guess; roots are symmetric.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1,1] -> [0,1]; ascending order
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.weights[i] = 0.5 * w;
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

void legendre_values(int degree, double x, std::span<double> out) {
  const double t = 2.0 * x - 1.0;
  double p0 = 1.0;
  double p1 = t;
  out[0] = 1.0;
  if (degree >= 1) out[1] = std::sqrt(3.0) * t;
  for (int p = 2; p <= degree; ++p) {
    const double p2 = ((2.0 * p - 1.0) * t * p1 - (p - 1.0) * p0) / p;
    p0 = p1;
    p1 = p2;
    out[p] = std::sqrt(2.0 * p + 1.0) * p2;
  }
}

void legendre_values_and_derivatives(int degree, double x, std::span<double> values,
                                     std::span<double> derivatives) {
  const double t = 2.0 * x - 1.0;
  // P_p and P'_p in t; d/dx = 2 d/dt
  double p_prev = 1.0, p_cur = t;
  double d_prev = 0.0, d_cur = 1.0;
  values[0] = 1.0;
  derivatives[0] = 0.0;
  if (degree >= 1) {
    values[1] = std::sqrt(3.0) * t;
    derivatives[1] = 2.0 * std::sqrt(3.0);
  }
  for (int p = 2; p <= degree; ++p) {
    const double p_next = ((2.0 * p - 1.0) * t * p_cur - (p - 1.0) * p_prev) / p;
    // P'_p = P'_{p-2} + (2p-1) P_{p-1}
    const double d_next = d_prev + (2.0 * p - 1.0) * p_cur;
    p_prev = p_cur;
    p_cur = p_next;
    d_prev = d_cur;
    d_cur = d_next;
    const double s = std::sqrt(2.0 * p + 1.0);
    values[p] = s * p_cur;
    derivatives[p] = 2.0 * s * d_cur;
  }
}

}  // namespace sgdg
