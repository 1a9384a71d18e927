#include "translab/limit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "translab/closed_forms.hpp"
#include "translab/field_io.hpp"
#include "translab/operators.hpp"

namespace translab {

namespace {

NodeIndex require_origin(const GridDomain& g) {
  const auto o = g.origin_node();
  if (!o) throw std::invalid_argument("field has no node at the origin");
  return *o;
}

// Slope and RMS residual of the least-squares line through (x, y).
struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
  double span = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (my + f.slope * (x[k] - mx));
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  f.span = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
  return f;
}

}  // namespace

Window default_window(const std::vector<double>& L_schedule) {
  if (L_schedule.empty()) throw std::invalid_argument("empty L schedule");
  return Window{0.5 * *std::min_element(L_schedule.begin(), L_schedule.end()), 0.1};
}

HeightField window_field(const HeightField& f, double b, const Window& window, bool renormalize) {
  const GridDomain& g = f.domain();
  const NodeIndex o = require_origin(g);
  if (!(window.W > 0.0) || !(window.delta >= 0.0) || !(window.delta < b)) {
    throw std::invalid_argument("window needs W > 0 and 0 <= delta < b");
  }
  const int hi = static_cast<int>(std::floor(window.W / g.dx() + 1e-9));
  const int hj = static_cast<int>(std::floor((b - window.delta) / g.dy() + 1e-9));
  if (hi < 1 || hj < 1) throw std::invalid_argument("window holds no interior nodes");
  if (o.i - hi < 0 || o.i + hi >= g.nx() || o.j - hj < 0 || o.j + hj >= g.ny()) {
    throw std::invalid_argument("window extends past the grid");
  }
  const double W = hi * g.dx();
  const double H = hj * g.dy();
  GridDomain wd = GridDomain::from_layout(2 * hi + 1, 2 * hj + 1, -W, -H, g.dx(), g.dy(), RectangleShape{W, H});
  const double shift = renormalize ? f(o.i, o.j) : 0.0;
  std::vector<double> values(wd.size());
  for (int j = 0; j < wd.ny(); ++j) {
    for (int i = 0; i < wd.nx(); ++i) {
      const double v = f(o.i - hi + i, o.j - hj + j);
      if (!std::isfinite(v)) throw std::invalid_argument("window reaches outside the field's region");
      values[wd.index(i, j)] = v - shift;
    }
  }
  return HeightField(std::move(wd), std::move(values));
}

double sup_difference(const HeightField& f, const HeightField& g) {
  const GridDomain& a = f.domain();
  const GridDomain& b = g.domain();
  if (a.nx() != b.nx() || a.ny() != b.ny() || a.x0() != b.x0() || a.y0() != b.y0() || a.dx() != b.dx() ||
      a.dy() != b.dy()) {
    throw std::invalid_argument("sup_difference: fields live on different grids");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.tag(k) != NodeTag::Exterior) m = std::max(m, std::abs(f[k] - g[k]));
  }
  return m;
}

double sup_difference(const HeightField& f, const std::function<double(double, double)>& target) {
  const GridDomain& g = f.domain();
  double m = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != NodeTag::Exterior) m = std::max(m, std::abs(f(i, j) - target(g.x(i), g.y(j))));
    }
  }
  return m;
}

LimitSweep run_sweep(double b, const std::vector<double>& L_schedule, const Window& window,
                     const SweepGrid& grid, const SolverConfig& cfg) {
  if (!(b > 0.0)) throw std::invalid_argument("sweep needs b > 0");
  if (L_schedule.empty()) throw std::invalid_argument("empty L schedule");
  for (std::size_t k = 1; k < L_schedule.size(); ++k) {
    if (!(L_schedule[k] > L_schedule[k - 1])) throw std::invalid_argument("L schedule must increase");
  }
  if (!(window.W <= L_schedule.front())) throw std::invalid_argument("window wider than the smallest rectangle");
  if (!(grid.dx > 0.0)) throw std::invalid_argument("sweep spacing must be positive");

  std::vector<int> nxs;
  for (double L : L_schedule) {
    const double cells = 2.0 * L / grid.dx;
    const double r = std::round(cells);
    if (std::abs(cells - r) > 1e-9 * std::max(1.0, r) || static_cast<long long>(r) % 2 != 0) {
      std::ostringstream msg;
      msg << "dx = " << grid.dx << " does not split [-" << L << ", " << L << "] into an even number of cells";
      throw std::invalid_argument(msg.str());
    }
    nxs.push_back(static_cast<int>(r) + 1);
  }

  LimitSweep sweep;
  sweep.b = b;
  sweep.L_schedule = L_schedule;
  sweep.window = window;
  sweep.grid = grid;
  for (std::size_t k = 0; k < L_schedule.size(); ++k) {
    Solution sol = solve(make_rectangle_domain(L_schedule[k], b, nxs[k], grid.ny), cfg);
    if (!sol.converged) {
      std::ostringstream msg;
      msg << "solve at L = " << L_schedule[k] << " failed: " << sol.message;
      sweep.complete = false;
      sweep.diagnostic = msg.str();
      break;
    }
    HeightField w = window_field(sol.field, b, window, true);
    const Gradient grad = central_gradient(w);
    double gmax = 0.0;
    for (std::size_t n = 0; n < grad.ux.size(); ++n) {
      if (std::isfinite(grad.ux[n])) gmax = std::max(gmax, std::hypot(grad.ux[n], grad.uy[n]));
    }
    sweep.center_heights.push_back(sol.center_height);
    sweep.max_gradients.push_back(gmax);
    sweep.renormalized.push_back(std::move(w));
    sweep.solutions.push_back(std::move(sol));
  }
  for (std::size_t k = 1; k < sweep.center_heights.size(); ++k) {
    if (!(sweep.center_heights[k] > sweep.center_heights[k - 1] - 1e-12)) sweep.monotone = false;
  }
  return sweep;
}

std::vector<double> center_increments(const LimitSweep& sweep) {
  std::vector<double> inc;
  for (std::size_t k = 1; k < sweep.center_heights.size(); ++k) {
    inc.push_back(sweep.center_heights[k] - sweep.center_heights[k - 1]);
  }
  return inc;
}

bool center_unbounded(const LimitSweep& sweep, double floor) {
  const auto inc = center_increments(sweep);
  if (inc.size() < 2) return false;
  return inc[inc.size() - 1] >= floor && inc[inc.size() - 2] >= floor;
}

TiltMeasurement measure_tilt(const HeightField& f) {
  const GridDomain& g = f.domain();
  const NodeIndex o = require_origin(g);
  double xmax = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    if (g.tag(i, o.j) != NodeTag::Exterior) xmax = std::max(xmax, std::abs(g.x(i)));
  }
  std::vector<double> xl, yl, xr, yr;
  const double cut = 0.8 * xmax - 1e-9 * xmax;
  for (int i = 0; i < g.nx(); ++i) {
    if (g.tag(i, o.j) == NodeTag::Exterior) continue;
    const double x = g.x(i);
    if (x <= -cut) {
      xl.push_back(x);
      yl.push_back(f(i, o.j));
    } else if (x >= cut) {
      xr.push_back(x);
      yr.push_back(f(i, o.j));
    }
  }
  if (xl.size() < 2 || xr.size() < 2) throw std::invalid_argument("measure_tilt: too few nodes in the outer 20%");
  const LineFit left = fit_line(xl, yl);
  const LineFit right = fit_line(xr, yr);
  TiltMeasurement m;
  m.left_slope = left.slope;
  m.right_slope = right.slope;
  m.tilt = 0.5 * (std::abs(left.slope) + std::abs(right.slope));
  m.fit_residual = std::max(left.rms / left.span, right.rms / right.span);
  m.reliable = m.fit_residual <= 0.1 * m.tilt;
  return m;
}

DeltaWingResult extract_delta_wing(const LimitSweep& sweep) {
  if (!(sweep.b > kHalfPi)) throw std::invalid_argument("Delta-wing extraction needs b > pi/2");
  const std::size_t n = sweep.renormalized.size();
  if (n < 3) throw std::invalid_argument("Delta-wing extraction needs at least three completed sweep entries");
  DeltaWingResult r{sweep.b, sweep.renormalized.back()};
  for (std::size_t k = 1; k < n; ++k) {
    r.cauchy_gaps.push_back(sup_difference(sweep.renormalized[k], sweep.renormalized[k - 1]));
  }
  r.cauchy_gap = r.cauchy_gaps.back();
  r.non_convergent = !(r.cauchy_gaps[n - 2] < r.cauchy_gaps[n - 3]);
  r.tilt = measure_tilt(r.limit_field);
  r.center_unbounded = center_unbounded(sweep);
  return r;
}

LinearHeightReport linear_height_check(const HeightField& f, Half half) {
  const GridDomain& g = f.domain();
  std::vector<std::pair<double, double>> cols;  // (x, z*)
  for (int i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    if (half == Half::Positive ? x < -1e-12 * g.dx() : x > 1e-12 * g.dx()) continue;
    double z = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny(); ++j) {
      if (g.tag(i, j) != NodeTag::Exterior) z = std::max(z, f(i, j));
    }
    if (std::isfinite(z)) cols.emplace_back(x, z);
  }
  if (cols.size() < 2) throw std::invalid_argument("linear_height_check: fewer than two columns in the half");
  std::sort(cols.begin(), cols.end(),
            [](const auto& p, const auto& q) { return std::abs(p.first) < std::abs(q.first); });
  LinearHeightReport rep;
  const double z0 = cols.front().second;
  for (const auto& [x, z] : cols) {
    rep.x.push_back(x);
    rep.z_star.push_back(z - z0);
  }
  // Consecutive columns suffice: the Lipschitz constant of a piecewise
  // linear interpolant is attained between neighbours.
  for (std::size_t k = 1; k < rep.x.size(); ++k) {
    const double s = std::abs(rep.z_star[k] - rep.z_star[k - 1]) / std::abs(rep.x[k] - rep.x[k - 1]);
    rep.lambda_est = std::max(rep.lambda_est, s);
  }
  rep.finite = std::isfinite(rep.lambda_est);
  return rep;
}

LinearHeightReport linear_height_check(const Solution& sol, Half half) {
  return linear_height_check(sol.field, half);
}

void write_sweep_csv(const std::filesystem::path& path, const LimitSweep& sweep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "L,center_height,cauchy_gap,measured_tilt,lambda_est\n";
  for (std::size_t k = 0; k < sweep.solutions.size(); ++k) {
    out << format_real(sweep.L_schedule[k]) << ',' << format_real(sweep.center_heights[k]) << ',';
    if (k > 0) out << format_real(sup_difference(sweep.renormalized[k], sweep.renormalized[k - 1]));
    out << ',' << format_real(measure_tilt(sweep.renormalized[k]).tilt) << ','
        << format_real(linear_height_check(sweep.solutions[k], Half::Positive).lambda_est) << '\n';
  }
}

}  // namespace translab
