#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgdg/kinetic.hpp"
#include "sgdg/projection.hpp"
#include "sgdg/sparse_function.hpp"

namespace sgdg {

/// Integral over the domain (the level-0 constant mode times the volume).
double integral(const SparseGridFunction& u);

/// Particle number, momentum per velocity dimension, total energy and enstrophy.
struct ConservedQuantities {
  double mass = 0.0;
  std::vector<double> momentum;
  double energy = 0.0;
  double enstrophy = 0.0;
};

/// Exact (moment-table and Parseval) evaluation. The field term of the energy is
/// added when `field` is non-null.
ConservedQuantities conserved_quantities(const PhaseSpace& ps, const SparseGridFunction& f,
                                         const SparseGridFunction* field = nullptr);

/// Drift of the invariants relative to the initial record: (Q - Q0) / |Q0|, or
/// Q - Q0 when Q0 = 0. Momentum is always absolute: the component of largest
/// magnitude of P - P0.
class ConservationTracker {
 public:
  explicit ConservationTracker(ConservedQuantities initial) : initial_(std::move(initial)) {}
  struct Errors {
    double mass = 0.0;
    double momentum = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
  };
  Errors errors(const ConservedQuantities& q) const;
  const ConservedQuantities& initial() const { return initial_; }

 private:
  ConservedQuantities initial_;
};

/// Value returned by log_fourier_mode when the mode vanishes to round-off.
inline constexpr double kLogModeFloor = -20.0;

/// log10((1/L) sqrt(S^2 + C^2)), S and C the integrals of E against sin and cos of
/// (n k x) over the field's interval, with 2(k+3) Gauss points per cell. Returns
/// kLogModeFloor when the amplitude is below round-off relative to mean |E|.
/// Throws std::invalid_argument for n < 1 or a non-1D field.
double log_fourier_mode(const SparseGridFunction& field, int n, double wave_number);

/// Same for a pointwise field on an interval with an explicit composite rule.
double log_fourier_mode(const std::function<double(double)>& field, Interval iv, int cells, int points_per_cell, int n,
                        double wave_number);

struct EntropyValues {
  double h_log = 0.0;
  double h2 = 0.0;
};

/// H_log = int H log H M and H_2 = int H^2 M with H = f / M, by composite
/// quadrature (k + 3 points per finest cell by default); H is clamped at 1e-14
/// inside the logarithm.
EntropyValues entropy_functionals(const RelaxationModel& model, const SparseGridFunction& f, int points_per_cell = 0);

/// log(e_{i-1} / e_i) / log(h_{i-1} / h_i) for consecutive entries.
/// Throws std::invalid_argument for non-positive values or mismatched sizes.
std::vector<double> convergence_orders(std::span<const double> errors, std::span<const double> h);

/// One line of the time-series CSV; inapplicable entries are NaN.
struct SeriesRow {
  double t = 0.0;
  double mass_rel_err = 0.0;
  double momentum_err = 0.0;
  double energy_rel_err = 0.0;
  double enstrophy_rel_err = 0.0;
  std::array<double, 4> log_modes{};
  double h_log = 0.0;
  double h2 = 0.0;
};

/// Formats a double with 17 significant digits ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double v);

void write_series_header(std::ostream& os);
void write_series_row(std::ostream& os, const SeriesRow& row);

}  // namespace sgdg
