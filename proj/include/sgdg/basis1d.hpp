#pragma once

#include <span>
#include <vector>

namespace sgdg {

/// Which one-sided limit to take at a breakpoint.
enum class Side { left, right };

/// One-sided traces of a basis function at the ends of its support and at its
/// interior breakpoint (the midpoint; only meaningful for level >= 1).
struct EdgeTraces {
  double lo_minus = 0.0;  // just outside the left end (always zero)
  double lo_plus = 0.0;
  double mid_minus = 0.0;
  double mid_plus = 0.0;
  double hi_minus = 0.0;
  double hi_plus = 0.0;  // just outside the right end (always zero)
};

/// Hierarchical 1D position of an element: level 0 has the single position 0,
/// level l >= 1 occupies positions [2^(l-1), 2^l).
constexpr int level_of_position(int pos) {
  int level = 0;
  while (pos > 0) {
    pos >>= 1;
    ++level;
  }
  return level;
}

constexpr int position_of(int level, int j) { return level == 0 ? 0 : (1 << (level - 1)) + j; }

constexpr int translation_of_position(int pos) {
  return pos == 0 ? 0 : pos - (1 << (level_of_position(pos) - 1));
}

/// Orthonormal multiwavelet basis on [0,1] for polynomial degree k.
///
/// Level 0 holds the k+1 orthonormal shifted Legendre polynomials. Level l >= 1,
/// translation j, holds 2^((l-1)/2) psi_i(2^(l-1) x - j), where psi_0..psi_k are the
/// mother wavelets: piecewise degree-k polynomials on [0,1/2] and [1/2,1],
/// orthogonal to all global polynomials of degree <= k.
///
/// The mother wavelets are stored in two-scale coordinates: psi_i restricted to
/// half h is sum_p c[i][h][p] sqrt(2) L_p(2x - h).
///
/// Poly indices are zero-based here (i = 0 is the constant mode).
class Basis1d {
 public:
  static constexpr int kMinDegree = 1;
  static constexpr int kMaxDegree = 4;

  explicit Basis1d(int degree);

  int degree() const { return degree_; }
  int order() const { return degree_ + 1; }

  /// Two-scale coefficient of mother wavelet i on half h against the p-th scaled
  /// Legendre function on that half.
  double wavelet_coeff(int i, int h, int p) const { return mother_[(i * 2 + h) * order() + p]; }

  /// Coefficient of L_q restricted to half h against sqrt(2) L_p(2x - h).
  double scaling_coeff(int q, int h, int p) const { return two_scale_[(q * 2 + h) * order() + p]; }

  double eval(int level, int j, int i, double x, Side side = Side::right) const;
  double eval_derivative(int level, int j, int i, double x, Side side = Side::right) const;

  /// Values of all k+1 functions of element (level, j) at x.
  void eval_all(int level, int j, double x, Side side, std::span<double> out) const;

  EdgeTraces edges(int level, int j, int i) const;

 private:
  void check_index(int level, int j, int i) const;
  /// Mother wavelet i (or Legendre if level 0) at local coordinate t in [0,1],
  /// piece chosen by side at t = 1/2.
  double local_value(int level, int i, double t, Side side, bool derivative) const;

  int degree_;
  std::vector<double> mother_;
  std::vector<double> two_scale_;
};

}  // namespace sgdg
