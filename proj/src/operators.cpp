#include "translab/operators.hpp"

#include <cmath>
#include <limits>

#include "fv_stencil.hpp"

namespace translab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

detail::Patch patch_at(const HeightField& f, int i, int j) {
  detail::Patch p{};
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) p[1 + dj][1 + di] = f(i + di, j + dj);
  }
  return p;
}

}  // namespace

NodeValues translator_residual(const HeightField& f, double t) {
  const GridDomain& g = f.domain();
  const double dx = g.dx();
  const double dy = g.dy();
  NodeValues out(g.size(), kNaN);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != NodeTag::Interior) continue;
      const double c = f(i, j);
      const double ux = (f(i + 1, j) - f(i - 1, j)) / (2.0 * dx);
      const double uy = (f(i, j + 1) - f(i, j - 1)) / (2.0 * dy);
      const double uxx = (f(i + 1, j) - 2.0 * c + f(i - 1, j)) / (dx * dx);
      const double uyy = (f(i, j + 1) - 2.0 * c + f(i, j - 1)) / (dy * dy);
      const double uxy =
          ((f(i + 1, j + 1) + f(i - 1, j - 1)) - (f(i - 1, j + 1) + f(i + 1, j - 1))) / (4.0 * dx * dy);
      out[g.index(i, j)] = (1.0 + uy * uy) * uxx - 2.0 * ux * uy * uxy + (1.0 + ux * ux) * uyy +
                           t * (1.0 + ux * ux + uy * uy);
    }
  }
  return out;
}

NodeValues divergence_residual(const HeightField& f, double t) {
  const GridDomain& g = f.domain();
  NodeValues out(g.size(), kNaN);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != NodeTag::Interior) continue;
      out[g.index(i, j)] = detail::fv_residual(patch_at(f, i, j), g.dx(), g.dy(), t, false).value;
    }
  }
  return out;
}

double ilmanen_area(const HeightField& f) {
  const GridDomain& g = f.domain();
  const double dx = g.dx();
  const double dy = g.dy();
  double sum = 0.0;
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (g.tag(i, j) == NodeTag::Exterior || g.tag(i + 1, j) == NodeTag::Exterior ||
          g.tag(i, j + 1) == NodeTag::Exterior || g.tag(i + 1, j + 1) == NodeTag::Exterior) {
        continue;
      }
      const double xc = g.x(i) + 0.5 * dx;
      const double yc = g.y(j) + 0.5 * dy;
      if (!shape_contains(g.shape(), xc, yc)) continue;
      const double u00 = f(i, j);
      const double u10 = f(i + 1, j);
      const double u01 = f(i, j + 1);
      const double u11 = f(i + 1, j + 1);
      const double uc = 0.25 * ((u00 + u11) + (u10 + u01));
      const double ux = ((u10 - u00) + (u11 - u01)) / (2.0 * dx);
      const double uy = ((u01 - u00) + (u11 - u10)) / (2.0 * dy);
      sum += std::exp(-uc) * std::sqrt(1.0 + ux * ux + uy * uy);
    }
  }
  return sum * dx * dy;
}

Gradient central_gradient(const HeightField& f) {
  const GridDomain& g = f.domain();
  Gradient out{NodeValues(g.size(), kNaN), NodeValues(g.size(), kNaN)};
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != NodeTag::Interior) continue;
      out.ux[g.index(i, j)] = (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.dx());
      out.uy[g.index(i, j)] = (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.dy());
    }
  }
  return out;
}

double max_abs(const NodeValues& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace translab
