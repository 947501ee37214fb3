#pragma once

#include <span>
#include <vector>

namespace sgdg {

/// Gauss-Legendre rule mapped to [0,1]. Exact for polynomials of degree 2n-1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

GaussRule gauss_legendre(int n);

/// Orthonormal shifted Legendre polynomials on [0,1]:
/// L_p(x) = sqrt(2p+1) P_p(2x-1), for p = 0..degree.
void legendre_values(int degree, double x, std::span<double> out);

/// Values and first derivatives (d/dx on [0,1]) of the same family.
void legendre_values_and_derivatives(int degree, double x, std::span<double> values,
                                     std::span<double> derivatives);

}  // namespace sgdg
