#include "sgdg/basis1d.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sgdg/quadrature.hpp"

namespace sgdg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

}  // namespace

Basis1d::Basis1d(int degree) : degree_(degree) {
  if (degree < kMinDegree || degree > kMaxDegree) {
    throw std::invalid_argument("Basis1d: degree " + std::to_string(degree) + " outside [" +
                                std::to_string(kMinDegree) + ", " + std::to_string(kMaxDegree) +
                                "]");
  }
  const int p_count = order();
  const int dim = 2 * p_count;  // piecewise polynomials on the two halves

  // Two-scale relation of the global Legendre family.
  two_scale_.assign(static_cast<std::size_t>(p_count) * dim, 0.0);
  const GaussRule rule = gauss_legendre(p_count + 1);
  std::vector<double> lq(p_count), lp(p_count);
  for (int h = 0; h < 2; ++h) {
    for (int n = 0; n < rule.size(); ++n) {
      const double s = rule.nodes[n];
      const double x = 0.5 * (s + h);
      legendre_values(degree_, x, lq);
      legendre_values(degree_, s, lp);
      for (int q = 0; q < p_count; ++q) {
        for (int p = 0; p < p_count; ++p) {
          // integral over half h: dx = ds / 2
          two_scale_[(q * 2 + h) * p_count + p] += 0.5 * rule.weights[n] * lq[q] * std::sqrt(2.0) * lp[p];
        }
      }
    }
  }

  // Gram-Schmidt in the 2(k+1)-dimensional coefficient space, where the Euclidean
  // inner product equals the L2 inner product on [0,1].
  std::vector<std::vector<double>> against;
  for (int q = 0; q < p_count; ++q) {
    against.emplace_back(two_scale_.begin() + q * dim, two_scale_.begin() + (q + 1) * dim);
  }
  std::vector<std::vector<double>> wavelets;
  for (int cand = 0; cand < dim && static_cast<int>(wavelets.size()) < p_count; ++cand) {
    std::vector<double> v(dim, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto* set : {&against, &wavelets}) {
        for (const auto& w : *set) {
          const double c = dot(v, w);
          for (int n = 0; n < dim; ++n) v[n] -= c * w[n];
        }
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    // Sign: leading coefficient of the right piece is positive.
    for (int p = p_count - 1; p >= 0; --p) {
      const double c = v[p_count + p];
      if (std::abs(c) > 1e-12) {
        if (c < 0.0) {
          for (double& x : v) x = -x;
        }
        break;
      }
    }
    wavelets.push_back(std::move(v));
  }
  if (static_cast<int>(wavelets.size()) != p_count) {
    throw std::logic_error("Basis1d: wavelet construction failed");
  }
  mother_.resize(static_cast<std::size_t>(p_count) * dim);
  for (int i = 0; i < p_count; ++i) {
    for (int n = 0; n < dim; ++n) mother_[i * dim + n] = wavelets[i][n];
  }
}

void Basis1d::check_index(int level, int j, int i) const {
  if (level < 0 || level > 30) throw std::out_of_range("Basis1d: level out of range");
  const int count = level == 0 ? 1 : 1 << (level - 1);
  if (j < 0 || j >= count) throw std::out_of_range("Basis1d: translation out of range");
  if (i < 0 || i > degree_) throw std::out_of_range("Basis1d: poly index out of range");
}

double Basis1d::local_value(int level, int i, double t, Side side, bool derivative) const {
  const int p_count = order();
  std::array<double, kMaxDegree + 1> vals{};
  std::array<double, kMaxDegree + 1> ders{};
  if (level == 0) {
    legendre_values_and_derivatives(degree_, t, vals, ders);
    return derivative ? ders[i] : vals[i];
  }
  int h = t < 0.5 ? 0 : 1;
  if (t == 0.5) h = side == Side::left ? 0 : 1;
  const double s = 2.0 * t - h;
  legendre_values_and_derivatives(degree_, s, vals, ders);
  double sum = 0.0;
  for (int p = 0; p < p_count; ++p) {
    sum += wavelet_coeff(i, h, p) * (derivative ? 2.0 * ders[p] : vals[p]);
  }
  return std::sqrt(2.0) * sum;
}

namespace {

// Local coordinate and support test for element (level, j); returns false if x is
// outside the (side-dependent) support.
bool locate(int level, int j, double x, Side side, double& t) {
  const double scale = level == 0 ? 1.0 : std::ldexp(1.0, level - 1);
  t = scale * x - j;
  if (side == Side::right) {
    if (t >= 0.0 && t < 1.0) return true;
    return t == 1.0 && x == 1.0;
  }
  if (t > 0.0 && t <= 1.0) return true;
  return t == 0.0 && x == 0.0;
}

}  // namespace

double Basis1d::eval(int level, int j, int i, double x, Side side) const {
  check_index(level, j, i);
  double t = 0.0;
  if (!locate(level, j, x, side, t)) return 0.0;
  const double amp = level == 0 ? 1.0 : std::sqrt(std::ldexp(1.0, level - 1));
  return amp * local_value(level, i, t, side, false);
}

double Basis1d::eval_derivative(int level, int j, int i, double x, Side side) const {
  check_index(level, j, i);
  double t = 0.0;
  if (!locate(level, j, x, side, t)) return 0.0;
  const double scale = level == 0 ? 1.0 : std::ldexp(1.0, level - 1);
  const double amp = level == 0 ? 1.0 : std::sqrt(scale);
  return amp * scale * local_value(level, i, t, side, true);
}

void Basis1d::eval_all(int level, int j, double x, Side side, std::span<double> out) const {
  check_index(level, j, 0);
  double t = 0.0;
  if (!locate(level, j, x, side, t)) {
    for (int i = 0; i < order(); ++i) out[i] = 0.0;
    return;
  }
  const double amp = level == 0 ? 1.0 : std::sqrt(std::ldexp(1.0, level - 1));
  std::array<double, kMaxDegree + 1> vals{};
  if (level == 0) {
    legendre_values(degree_, t, vals);
    for (int i = 0; i < order(); ++i) out[i] = vals[i];
    return;
  }
  int h = t < 0.5 ? 0 : 1;
  if (t == 0.5) h = side == Side::left ? 0 : 1;
  legendre_values(degree_, 2.0 * t - h, vals);
  for (int i = 0; i < order(); ++i) {
    double sum = 0.0;
    for (int p = 0; p < order(); ++p) sum += wavelet_coeff(i, h, p) * vals[p];
    out[i] = amp * std::sqrt(2.0) * sum;
  }
}

EdgeTraces Basis1d::edges(int level, int j, int i) const {
  check_index(level, j, i);
  const double width = level == 0 ? 1.0 : std::ldexp(1.0, -(level - 1));
  const double lo = j * width;
  const double hi = (j + 1) * width;
  EdgeTraces tr;
  tr.lo_plus = eval(level, j, i, lo, Side::right);
  tr.hi_minus = eval(level, j, i, hi, Side::left);
  if (level == 0) {
    tr.mid_minus = tr.mid_plus = eval(level, j, i, 0.5);
  } else {
    const double mid = 0.5 * (lo + hi);
    tr.mid_minus = eval(level, j, i, mid, Side::left);
    tr.mid_plus = eval(level, j, i, mid, Side::right);
  }
  return tr;
}

}  // namespace sgdg
