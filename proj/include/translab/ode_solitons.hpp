// Rotationally invariant translators: the bowl soliton and the translating
// catenoids W(lambda).
#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace translab {

/// Piecewise cubic Hermite interpolant through (x_k, y_k) with slopes m_k,
/// x strictly increasing.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> m);

  double operator()(double x) const;
  double slope(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;
};

/// Sampled bowl soliton. `u` is the depth below the apex: the bowl surface in
/// this library's orientation is z = -u(|p|), opening downward like the grim
/// reaper log(cos y). u solves u'' = (1+u'^2)(1 - u'/r), u(0) = u'(0) = 0.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  /// Interpolant of (r, u, du), filled by bowl_profile.
  HermiteTable table;

  /// Interpolated depth u(r) and slope u'(r).
  double depth(double radius) const;
  double depth_slope(double radius) const;
  /// Height of the bowl surface, -u(r).
  double height(double radius) const { return -depth(radius); }
};

/// Fixed-step classical RK4 on [0, r_max]; the first step uses the series
/// u = r^2/4 + r^4/128. Throws std::invalid_argument when h is not positive or
/// h * max(1, r_max) exceeds the explicit stability bound 2.5 (the slope
/// equation has stiffness ~ r for large r).
RadialProfile bowl_profile(double r_max, double h);

/// Profile curve (r(s), z(s)) of W(lambda) in arclength, with tangent angle
/// theta: r' = cos theta, z' = sin theta, theta' = -sin theta / r - cos theta.
/// Starts at the neck r = lambda, z = 0, theta = pi/2 and is integrated in both
/// directions. With unit normal (-sin theta, cos theta) in the (r, z) plane,
/// the mean curvature is H = theta' + sin theta / r and the translator
/// equation reads H + e3.nu = 0.
struct ProfileCurve {
  double lambda = 0.0;
  std::vector<double> s;  // ascending, s = 0 at the neck
  std::vector<double> r;
  std::vector<double> z;
  std::vector<double> theta;

  std::size_t neck_index() const;
};

/// Integrates both wings with fixed RK4 step h over s in [-s_max, s_max].
/// Throws std::runtime_error if the curve reaches the axis (r <= 0).
ProfileCurve catenoid_profile(double lambda, double s_max, double h);

enum class Wing { Upper, Lower };

/// A wing as a graph z(r) over r in [lambda, r_end] (both wings are graphs
/// over the radius: r is monotone away from the neck).
HermiteTable wing_graph(const ProfileCurve& c, Wing wing);

/// min over the curve of r(s); equals lambda for W(lambda).
double necksize_rotational(const ProfileCurve& c);
/// The bowl meets the axis.
double necksize_rotational(const RadialProfile& p);

/// Independent check of H + e3.nu along the curve: curvature and tangent
/// from 4th-order finite differences of the sampled (r, z) with stride
/// `stride`. Entries near the ends are NaN.
std::vector<double> catenoid_curvature_defect(const ProfileCurve& c, int stride);

void write_profile_csv(const std::filesystem::path& path, const ProfileCurve& c);
void write_bowl_csv(const std::filesystem::path& path, const RadialProfile& p);

}  // namespace translab
