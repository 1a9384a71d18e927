// Renormalized L -> infinity limits of the rectangle solutions u_{L,b}:
// grim-reaper limits for b < pi/2, Delta-wing extraction for b > pi/2,
// tilt measurement and linear height bounds.
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "translab/dirichlet.hpp"
#include "translab/grid.hpp"

namespace translab {

/// Compact window [-W, W] x [-(b - delta), b - delta]; extents are rounded
/// inward to grid nodes.
struct Window {
  double W = 0.0;
  double delta = 0.1;
};

/// Every rectangle in a sweep shares the spacings dx and 2b/(ny-1), so the
/// windows of all solutions coincide node for node. 2L/dx must be an even
/// integer for each L.
struct SweepGrid {
  double dx = 0.125;
  int ny = 65;
};

/// [-L0/2, L0/2] x [-b+0.1, b-0.1] with L0 the smallest schedule entry.
Window default_window(const std::vector<double>& L_schedule);

struct LimitSweep {
  double b = 0.0;
  std::vector<double> L_schedule;
  Window window;
  SweepGrid grid;
  std::vector<Solution> solutions;
  /// u_{L,b} - u_{L,b}(0,0) on the window, one per completed L.
  std::vector<HeightField> renormalized;
  std::vector<double> center_heights;
  /// max |Du| over the window interior, per completed L.
  std::vector<double> max_gradients;
  /// False when a solve failed; later entries are then missing.
  bool complete = true;
  /// Center heights strictly increasing (slack 1e-12).
  bool monotone = true;
  std::string diagnostic;
};

/// Solves u_{L,b} for each L in the (increasing) schedule and renormalizes on
/// the window. Stops at the first failed solve, recording why. Throws
/// std::invalid_argument for a bad schedule, a window outside the smallest
/// rectangle, or a spacing that does not divide 2L.
LimitSweep run_sweep(double b, const std::vector<double>& L_schedule, const Window& window,
                     const SweepGrid& grid, const SolverConfig& cfg = {});

/// Restriction of a rectangle solution to the window, shifted so that the
/// origin value is 0 (when `renormalize`).
HeightField window_field(const HeightField& f, double b, const Window& window, bool renormalize);

/// sup over non-Exterior nodes of |f - g|; both on the same grid layout.
double sup_difference(const HeightField& f, const HeightField& g);
/// sup over non-Exterior nodes of |f(x, y) - target(x, y)|.
double sup_difference(const HeightField& f, const std::function<double(double, double)>& target);

/// Desk-scale proxy for the dichotomy: increments of the center height of at
/// least `floor` across each of the last two schedule steps. Heuristic: the
/// dichotomy holds only at L = infinity.
bool center_unbounded(const LimitSweep& sweep, double floor = 0.05);
std::vector<double> center_increments(const LimitSweep& sweep);

struct TiltMeasurement {
  double tilt = 0.0;         // mean of |left slope| and |right slope|
  double left_slope = 0.0;   // fit over the leftmost 20% (positive for a wing)
  double right_slope = 0.0;  // fit over the rightmost 20%
  /// RMS fit residual divided by the fitted x-span, worst side.
  double fit_residual = 0.0;
  bool reliable = true;
};

/// Least-squares slopes of x -> u(x, 0) over the outer 20% of the field's
/// x-extent on each side. Unreliable when fit_residual > 10% of the tilt.
TiltMeasurement measure_tilt(const HeightField& f);

struct DeltaWingResult {
  double b = 0.0;
  HeightField limit_field;
  /// sup |R_last - R_prev| of the last two renormalized fields.
  double cauchy_gap = 0.0;
  /// Gap between each consecutive pair, in schedule order.
  std::vector<double> cauchy_gaps;
  TiltMeasurement tilt;
  bool center_unbounded = false;
  /// Set when the gap did not decrease across the last three entries.
  bool non_convergent = false;
};

/// Requires b > pi/2 and at least three completed schedule entries; throws
/// std::invalid_argument otherwise.
DeltaWingResult extract_delta_wing(const LimitSweep& sweep);

enum class Half { Positive, Negative };

struct LinearHeightReport {
  double lambda_est = 0.0;
  bool finite = true;
  /// Column maxima z*(x) - z*(0) over the half, ordered by increasing |x|.
  std::vector<double> x;
  std::vector<double> z_star;
};

/// Smallest lambda with |z*(x') - z*(x)| <= lambda |x' - x| over the columns
/// of the chosen half, where z*(x) is the max over y of the field.
LinearHeightReport linear_height_check(const HeightField& f, Half half);
LinearHeightReport linear_height_check(const Solution& sol, Half half);

/// CSV with columns L, center_height, cauchy_gap, measured_tilt, lambda_est.
/// cauchy_gap is empty for the first row.
void write_sweep_csv(const std::filesystem::path& path, const LimitSweep& sweep);

}  // namespace translab
