#include "translab/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace translab {

namespace {

constexpr double kAlignTol = 1e-7;

// Fractional grid index of coordinate v; throws if it is not a node.
int aligned_index(double v, double origin, double spacing, const char* what) {
  const double f = (v - origin) / spacing;
  const double r = std::round(f);
  if (std::abs(f - r) > kAlignTol * std::max(1.0, std::abs(r))) {
    std::ostringstream msg;
    msg << what << " = " << v << " does not fall on a grid node (index " << f << ")";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(r);
}

struct IndexBox {
  int i0, i1, j0, j1;
  bool closed_contains(int i, int j) const { return i >= i0 && i <= i1 && j >= j0 && j <= j1; }
  bool open_contains(int i, int j) const { return i > i0 && i < i1 && j > j0 && j < j1; }
};

bool is_odd(int n) { return n % 2 != 0; }

bool divides(double length, double spacing) {
  const double f = length / spacing;
  return std::abs(f - std::round(f)) <= kAlignTol * std::max(1.0, std::abs(f));
}

}  // namespace

std::string describe(const ShapeMeta& shape) {
  std::ostringstream out;
  out.precision(17);
  if (const auto* r = std::get_if<RectangleShape>(&shape)) {
    out << "Rectangle " << r->L << ' ' << r->b;
  } else {
    const auto& a = std::get<AnnulusShape>(shape);
    out << "Annulus " << a.a << ' ' << a.b << ' ' << a.A << ' ' << a.B;
  }
  return out.str();
}

bool shape_contains(const ShapeMeta& shape, double x, double y) {
  if (const auto* r = std::get_if<RectangleShape>(&shape)) {
    return std::abs(x) <= r->L && std::abs(y) <= r->b;
  }
  const auto& a = std::get<AnnulusShape>(shape);
  const bool in_outer = std::abs(x) <= a.A && std::abs(y) <= a.B;
  const bool in_hole = std::abs(x) < a.a && std::abs(y) < a.b;
  return in_outer && !in_hole;
}

GridDomain GridDomain::from_layout(int nx, int ny, double x0, double y0, double dx, double dy,
                                   ShapeMeta shape) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2x2 nodes");
  if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("grid spacing must be positive");

  GridDomain g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.x0_ = x0;
  g.y0_ = y0;
  g.dx_ = dx;
  g.dy_ = dy;
  g.shape_ = shape;
  g.mask_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), NodeTag::Exterior);

  auto box = [&](double hx, double hy) {
    return IndexBox{aligned_index(-hx, x0, dx, "x edge"), aligned_index(hx, x0, dx, "x edge"),
                    aligned_index(-hy, y0, dy, "y edge"), aligned_index(hy, y0, dy, "y edge")};
  };

  if (const auto* r = std::get_if<RectangleShape>(&shape)) {
    if (!(r->L > 0.0) || !(r->b > 0.0)) throw std::invalid_argument("rectangle needs L, b > 0");
    const IndexBox outer = box(r->L, r->b);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!outer.closed_contains(i, j)) continue;
        g.mask_[g.index(i, j)] = outer.open_contains(i, j) ? NodeTag::Interior : NodeTag::Boundary;
      }
    }
  } else {
    const auto& a = std::get<AnnulusShape>(shape);
    if (!(a.a > 0.0 && a.b > 0.0 && a.a < a.A && a.b < a.B)) {
      throw std::invalid_argument("annulus needs 0 < a < A and 0 < b < B");
    }
    const IndexBox outer = box(a.A, a.B);
    const IndexBox inner = box(a.a, a.b);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!outer.closed_contains(i, j) || inner.open_contains(i, j)) continue;
        const bool edge = !outer.open_contains(i, j) || inner.closed_contains(i, j);
        g.mask_[g.index(i, j)] = edge ? NodeTag::Boundary : NodeTag::Interior;
      }
    }
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (g.tag(i, j) != NodeTag::Interior) continue;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny || g.tag(ii, jj) == NodeTag::Exterior) {
            throw std::logic_error("mask invariant violated: interior node touches exterior");
          }
        }
      }
    }
  }
  return g;
}

std::size_t GridDomain::count(NodeTag t) const {
  std::size_t n = 0;
  for (NodeTag m : mask_) n += (m == t) ? 1 : 0;
  return n;
}

std::optional<NodeIndex> GridDomain::origin_node() const {
  const double fi = -x0_ / dx_;
  const double fj = -y0_ / dy_;
  const double ri = std::round(fi);
  const double rj = std::round(fj);
  if (std::abs(fi - ri) > kAlignTol || std::abs(fj - rj) > kAlignTol) return std::nullopt;
  const int i = static_cast<int>(ri);
  const int j = static_cast<int>(rj);
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  return NodeIndex{i, j};
}

bool GridDomain::symmetric_about_origin() const {
  const auto o = origin_node();
  return o && 2 * o->i == nx_ - 1 && 2 * o->j == ny_ - 1;
}

GridDomain make_rectangle_domain(double L, double b, int nx, int ny) {
  if (!(L > 0.0) || !(b > 0.0)) throw std::invalid_argument("rectangle needs L > 0 and b > 0");
  if (nx < 5 || ny < 5) throw std::invalid_argument("rectangle grid needs nx, ny >= 5");
  if (!is_odd(nx) || !is_odd(ny)) {
    throw std::invalid_argument("nx and ny must be odd so that (0,0) is a grid node");
  }
  const double dx = 2.0 * L / (nx - 1);
  const double dy = 2.0 * b / (ny - 1);
  return GridDomain::from_layout(nx, ny, -L, -b, dx, dy, RectangleShape{L, b});
}

GridDomain make_annular_domain(double a, double b, double A, double B, int nx, int ny) {
  if (!(a > 0.0 && b > 0.0 && a < A && b < B)) {
    throw std::invalid_argument("annulus needs 0 < a < A and 0 < b < B");
  }
  if (nx < 5 || ny < 5) throw std::invalid_argument("annulus grid needs nx, ny >= 5");

  auto compatible = [](double inner, double outer, int n) {
    if (!is_odd(n)) return false;
    const double h = 2.0 * outer / (n - 1);
    return divides(inner, h) && divides(outer, h);
  };
  if (!compatible(a, A, nx) || !compatible(b, B, ny)) {
    auto smallest = [&](double inner, double outer) -> int {
      for (int n = 5; n <= 1000001; n += 2) {
        if (compatible(inner, outer, n)) return n;
      }
      return -1;
    };
    std::ostringstream msg;
    msg << "grid spacing must divide a, A and b, B; smallest compatible nx = " << smallest(a, A)
        << ", ny = " << smallest(b, B) << " (-1: none up to 1000001)";
    throw std::invalid_argument(msg.str());
  }
  const double dx = 2.0 * A / (nx - 1);
  const double dy = 2.0 * B / (ny - 1);
  return GridDomain::from_layout(nx, ny, -A, -B, dx, dy, AnnulusShape{a, b, A, B});
}

HeightField::HeightField(GridDomain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_.size()) {
    throw std::invalid_argument("height field size does not match its grid");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (domain_.tag(k) == NodeTag::Exterior) {
      values_[k] = std::numeric_limits<double>::quiet_NaN();
    } else if (!std::isfinite(values_[k])) {
      throw std::invalid_argument("height field must be finite on interior and boundary nodes");
    }
  }
}

HeightField HeightField::zero(const GridDomain& domain) { return constant(domain, 0.0); }

HeightField HeightField::constant(const GridDomain& domain, double c) {
  return HeightField(domain, std::vector<double>(domain.size(), c));
}

HeightField HeightField::sample(const GridDomain& domain,
                                const std::function<double(double, double)>& f) {
  std::vector<double> v(domain.size(), std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < domain.ny(); ++j) {
    for (int i = 0; i < domain.nx(); ++i) {
      if (domain.tag(i, j) != NodeTag::Exterior) v[domain.index(i, j)] = f(domain.x(i), domain.y(j));
    }
  }
  return HeightField(domain, std::move(v));
}

std::vector<double> HeightField::boundary_values() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (domain_.tag(k) == NodeTag::Boundary) out.push_back(values_[k]);
  }
  return out;
}

HeightField HeightField::shifted(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x += c;
  return HeightField(domain_, std::move(v));
}

}  // namespace translab
