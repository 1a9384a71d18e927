#include "translab/ode_solitons.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "translab/closed_forms.hpp"
#include "translab/field_io.hpp"

namespace translab {

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> m)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(m)) {
  if (x_.size() < 2 || y_.size() != x_.size() || m_.size() != x_.size()) {
    throw std::invalid_argument("Hermite table needs >= 2 samples of matching length");
  }
  for (std::size_t k = 1; k < x_.size(); ++k) {
    if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("Hermite abscissae must increase");
  }
}

std::size_t HermiteTable::segment(double x) const {
  if (x_.empty()) throw std::logic_error("empty Hermite table");
  if (x < x_.front() || x > x_.back()) {
    std::ostringstream msg;
    msg << "x = " << x << " outside table range [" << x_.front() << ", " << x_.back() << "]";
    throw std::out_of_range(msg.str());
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) k = 1;
  if (k >= x_.size()) k = x_.size() - 1;
  return k - 1;
}

double HermiteTable::operator()(double x) const {
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * m_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
         (t3 - t2) * h * m_[k + 1];
}

double HermiteTable::slope(double x) const {
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[k] + (-6 * t2 + 6 * t) * y_[k + 1]) / h + (3 * t2 - 4 * t + 1) * m_[k] +
         (3 * t2 - 2 * t) * m_[k + 1];
}

double RadialProfile::depth(double radius) const { return table(std::abs(radius)); }

double RadialProfile::depth_slope(double radius) const { return table.slope(std::abs(radius)); }

namespace {

// Bowl: y = (u, u').
std::array<double, 2> bowl_rhs(double r, const std::array<double, 2>& y) {
  const double p = y[1];
  return {p, (1.0 + p * p) * (1.0 - p / r)};
}

using CatState = std::array<double, 3>;  // r, z, theta

CatState catenoid_rhs(const CatState& y) {
  const double st = std::sin(y[2]);
  const double ct = std::cos(y[2]);
  return {ct, st, -st / y[0] - ct};
}

template <std::size_t N, class F>
std::array<double, N> rk4_step(const std::array<double, N>& y, double h, F&& f) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> out;
    for (std::size_t k = 0; k < N; ++k) out[k] = a[k] + s * b[k];
    return out;
  };
  const auto k1 = f(0.0, y);
  const auto k2 = f(0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(h, axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t k = 0; k < N; ++k) out[k] = y[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  return out;
}

}  // namespace

RadialProfile bowl_profile(double r_max, double h) {
  if (!(r_max > 0.0)) throw std::invalid_argument("bowl_profile needs r_max > 0");
  if (!(h > 0.0)) throw std::invalid_argument("bowl_profile needs a positive step");
  if (h * std::max(1.0, r_max) > 2.5) {
    std::ostringstream msg;
    msg << "step " << h << " too large for stability up to r = " << r_max
        << " (need h * max(1, r_max) <= 2.5)";
    throw std::invalid_argument(msg.str());
  }
  const auto steps = static_cast<std::size_t>(std::ceil(r_max / h - 1e-9));
  const double step = r_max / static_cast<double>(steps);

  RadialProfile p;
  p.r.reserve(steps + 1);
  p.r.push_back(0.0);
  p.u.push_back(0.0);
  p.du.push_back(0.0);

  // Series bootstrap across the removable singularity at r = 0.
  std::array<double, 2> y{step * step / 4.0 + std::pow(step, 4) / 128.0, step / 2.0 + std::pow(step, 3) / 32.0};
  p.r.push_back(step);
  p.u.push_back(y[0]);
  p.du.push_back(y[1]);
  for (std::size_t n = 1; n < steps; ++n) {
    const double r0 = static_cast<double>(n) * step;
    y = rk4_step<2>(y, step, [&](double dr, const std::array<double, 2>& v) { return bowl_rhs(r0 + dr, v); });
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      throw std::runtime_error("bowl integration produced a non-finite value");
    }
    p.r.push_back(static_cast<double>(n + 1) * step);
    p.u.push_back(y[0]);
    p.du.push_back(y[1]);
  }
  p.table = HermiteTable(p.r, p.u, p.du);
  return p;
}

std::size_t ProfileCurve::neck_index() const {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 0.0) return k;
  }
  throw std::logic_error("profile curve has no s = 0 sample");
}

ProfileCurve catenoid_profile(double lambda, double s_max, double h) {
  if (!(lambda > 0.0)) throw std::invalid_argument("catenoid_profile needs lambda > 0");
  if (!(s_max > 0.0) || !(h > 0.0)) throw std::invalid_argument("catenoid_profile needs s_max, h > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(s_max / h - 1e-9));
  const double step = s_max / static_cast<double>(steps);

  auto integrate = [&](double dir) {
    std::vector<CatState> states;
    states.reserve(steps + 1);
    CatState y{lambda, 0.0, kHalfPi};
    states.push_back(y);
    for (std::size_t n = 0; n < steps; ++n) {
      y = rk4_step<3>(y, dir * step, [](double, const CatState& v) { return catenoid_rhs(v); });
      if (!(y[0] > 0.0) || !std::isfinite(y[1]) || !std::isfinite(y[2])) {
        std::ostringstream msg;
        msg << "catenoid profile reached the axis at s = " << dir * static_cast<double>(n + 1) * step
            << " (r = " << y[0] << "); check the orientation of the theta equation";
        throw std::runtime_error(msg.str());
      }
      states.push_back(y);
    }
    return states;
  };
  const auto fwd = integrate(+1.0);
  const auto bwd = integrate(-1.0);

  ProfileCurve c;
  c.lambda = lambda;
  const std::size_t total = 2 * steps + 1;
  c.s.reserve(total);
  c.r.reserve(total);
  c.z.reserve(total);
  c.theta.reserve(total);
  for (std::size_t n = steps; n >= 1; --n) {
    c.s.push_back(-static_cast<double>(n) * step);
    c.r.push_back(bwd[n][0]);
    c.z.push_back(bwd[n][1]);
    c.theta.push_back(bwd[n][2]);
  }
  for (std::size_t n = 0; n <= steps; ++n) {
    c.s.push_back(static_cast<double>(n) * step);
    c.r.push_back(fwd[n][0]);
    c.z.push_back(fwd[n][1]);
    c.theta.push_back(fwd[n][2]);
  }
  return c;
}

HermiteTable wing_graph(const ProfileCurve& c, Wing wing) {
  const std::size_t neck = c.neck_index();
  std::vector<double> r, z, m;
  auto take = [&](std::size_t k) {
    r.push_back(c.r[k]);
    z.push_back(c.z[k]);
    m.push_back(std::tan(c.theta[k]));
  };
  // Skip the neck sample itself, where the tangent is vertical.
  if (wing == Wing::Upper) {
    for (std::size_t k = neck + 1; k < c.s.size(); ++k) take(k);
  } else {
    for (std::size_t k = neck; k-- > 0;) take(k);
  }
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (!(r[k] > r[k - 1])) throw std::runtime_error("wing is not a graph over the radius");
  }
  return HermiteTable(std::move(r), std::move(z), std::move(m));
}

double necksize_rotational(const ProfileCurve& c) {
  return *std::min_element(c.r.begin(), c.r.end());
}

double necksize_rotational(const RadialProfile&) { return 0.0; }

std::vector<double> catenoid_curvature_defect(const ProfileCurve& c, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const std::size_t n = c.s.size();
  const auto k = static_cast<std::size_t>(stride);
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  if (n <= 4 * k) return out;
  const double H = c.s[k] - c.s[0];
  auto d1 = [&](const std::vector<double>& f, std::size_t i) {
    return (-f[i + 2 * k] + 8.0 * f[i + k] - 8.0 * f[i - k] + f[i - 2 * k]) / (12.0 * H);
  };
  auto d2 = [&](const std::vector<double>& f, std::size_t i) {
    return (-f[i + 2 * k] + 16.0 * f[i + k] - 30.0 * f[i] + 16.0 * f[i - k] - f[i - 2 * k]) / (12.0 * H * H);
  };
  for (std::size_t i = 2 * k; i + 2 * k < n; ++i) {
    const double rp = d1(c.r, i);
    const double zp = d1(c.z, i);
    const double rpp = d2(c.r, i);
    const double zpp = d2(c.z, i);
    const double speed = std::sqrt(rp * rp + zp * zp);
    const double kappa = (rp * zpp - zp * rpp) / (speed * speed * speed);
    const double sin_t = zp / speed;
    const double cos_t = rp / speed;
    out[i] = kappa + sin_t / c.r[i] + cos_t;
  }
  return out;
}

void write_profile_csv(const std::filesystem::path& path, const ProfileCurve& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "s,r,z,theta\n";
  for (std::size_t k = 0; k < c.s.size(); ++k) {
    out << format_real(c.s[k]) << ',' << format_real(c.r[k]) << ',' << format_real(c.z[k]) << ','
        << format_real(c.theta[k]) << '\n';
  }
}

void write_bowl_csv(const std::filesystem::path& path, const RadialProfile& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "r,u,du\n";
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    out << format_real(p.r[k]) << ',' << format_real(p.u[k]) << ',' << format_real(p.du[k]) << '\n';
  }
}

}  // namespace translab
