#pragma once

// Textbook modal DG for u_t + a u_x = 0 on a periodic uniform grid of [0,1],
// orthonormal Legendre modes per cell, upwind flux, SSP-RK3. Written from closed
// forms; it shares no code with the library.

#include <cmath>
#include <vector>

namespace sgdg::testing {

class FullGridDg {
 public:
  FullGridDg(int degree, int level, double speed)
      : order_(degree + 1), cells_(1 << level), speed_(speed), h_(1.0 / cells_) {}

  int size() const { return order_ * cells_; }

  /// Coefficients against sqrt(cells) L_p((x - x_j) / h): per-cell orthonormal on [0,1].
  void rhs(const std::vector<double>& c, std::vector<double>& out) const {
    out.assign(c.size(), 0.0);
    const double scale = 1.0 / h_;  // d/dx of the local coordinate
    for (int j = 0; j < cells_; ++j) {
      const double* cj = c.data() + j * order_;
      double* oj = out.data() + j * order_;
      // Volume: a sum_q c_q int L_q L_p' (local), times 1/h from the chain rule.
      for (int p = 0; p < order_; ++p) {
        double s = 0.0;
        for (int q = 0; q < p; ++q) {
          if ((p + q) % 2 == 1) s += 2.0 * std::sqrt((2.0 * p + 1) * (2.0 * q + 1)) * cj[q];
        }
        oj[p] += speed_ * scale * s;
      }
      // Upwind traces at both cell ends.
      const double right_flux = speed_ * trace_flux(c, j);
      const double left_flux = speed_ * trace_flux(c, (j - 1 + cells_) % cells_);
      for (int p = 0; p < order_; ++p) {
        oj[p] -= scale * (right_flux * end_value(p, true) - left_flux * end_value(p, false));
      }
    }
  }

  void rk3(std::vector<double>& c, double dt) const {
    std::vector<double> r, u1(c.size()), u2(c.size());
    rhs(c, r);
    for (std::size_t i = 0; i < c.size(); ++i) u1[i] = c[i] + dt * r[i];
    rhs(u1, r);
    for (std::size_t i = 0; i < c.size(); ++i) u2[i] = 0.75 * c[i] + 0.25 * u1[i] + 0.25 * dt * r[i];
    rhs(u2, r);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = c[i] / 3.0 + 2.0 / 3.0 * u2[i] + 2.0 / 3.0 * dt * r[i];
  }

 private:
  // L_p at the right (1) or left (0) end of the unit interval.
  static double end_value(int p, bool right) {
    const double v = std::sqrt(2.0 * p + 1);
    return right || p % 2 == 0 ? v : -v;
  }

  // Upwind state at the right face of cell j, divided by the basis amplitude.
  double trace_flux(const std::vector<double>& c, int j) const {
    const int src = speed_ >= 0 ? j : (j + 1) % cells_;
    const bool right_end = speed_ >= 0;
    double s = 0.0;
    for (int p = 0; p < order_; ++p) s += c[src * order_ + p] * end_value(p, right_end);
    return s;
  }

  int order_;
  int cells_;
  double speed_;
  double h_;
};

}  // namespace sgdg::testing
