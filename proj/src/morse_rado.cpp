#include "translab/morse_rado.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "translab/field_io.hpp"
#include "translab/operators.hpp"

namespace translab {

FoliationFunction FoliationFunction::vertical_plane(double vx, double vy) {
  const double n = std::hypot(vx, vy);
  if (!(n > 0.0)) throw std::invalid_argument("vertical plane foliation needs a nonzero direction");
  FoliationFunction f;
  f.kind_ = Kind::VerticalPlane;
  f.v_ = {vx / n, vy / n};
  return f;
}

FoliationFunction FoliationFunction::closed_form(const ClosedFormFamily& fam, double angle) {
  FoliationFunction f;
  f.kind_ = Kind::GraphFamily;
  f.fam_ = fam;
  f.angle_ = angle;
  return f;
}

FoliationFunction FoliationFunction::bowl(std::shared_ptr<const RadialProfile> profile) {
  if (!profile || profile->table.empty()) throw std::invalid_argument("bowl foliation needs a computed profile");
  FoliationFunction f;
  f.kind_ = Kind::GraphFamily;
  f.bowl_ = std::move(profile);
  return f;
}

std::string FoliationFunction::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (kind_ == Kind::VerticalPlane) {
    out << "VerticalPlane " << v_.x << ' ' << v_.y;
  } else if (bowl_) {
    out << "GraphFamily bowl";
  } else {
    const char* names[] = {"GrimReaper", "ShiftedGrimReaper", "TiltedGrimReaper"};
    out << "GraphFamily " << names[static_cast<int>(fam_->kind())] << " b=" << fam_->b() << " angle=" << angle_;
  }
  return out.str();
}

bool FoliationFunction::defined(double x, double y) const {
  if (kind_ == Kind::VerticalPlane) return true;
  if (bowl_) return std::hypot(x, y) <= bowl_->table.x_max();
  const double yl = -x * std::sin(angle_) + y * std::cos(angle_);
  return std::abs(yl) < fam_->half_width() - kStripGuard;
}

double FoliationFunction::h(double x, double y) const {
  if (kind_ == Kind::VerticalPlane) throw std::logic_error("vertical planes have no height function");
  if (bowl_) return -bowl_->depth(std::hypot(x, y));
  const double c = std::cos(angle_);
  const double s = std::sin(angle_);
  return evaluate(*fam_, x * c + y * s, -x * s + y * c);
}

Vec2 FoliationFunction::grad_h(double x, double y) const {
  if (kind_ == Kind::VerticalPlane) throw std::logic_error("vertical planes have no height function");
  if (bowl_) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return {0.0, 0.0};
    const double d = -bowl_->depth_slope(r);
    return {d * x / r, d * y / r};
  }
  const double c = std::cos(angle_);
  const double s = std::sin(angle_);
  const Vec2 g = gradient(*fam_, x * c + y * s, -x * s + y * c);
  return {g.x * c - g.y * s, g.x * s + g.y * c};
}

double FoliationFunction::operator()(double x, double y, double z) const {
  if (kind_ == Kind::VerticalPlane) return v_.x * x + v_.y * y;
  return z - h(x, y);
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Box {
  int i0, i1, j0, j1;  // node index box, inclusive
};

// Winding number of V around the node box, counterclockwise. Empty when a
// perimeter node is unusable or V vanishes on the loop.
std::optional<int> winding(const Box& b, const GridDomain& g, const std::vector<char>& valid,
                           const std::vector<double>& vx, const std::vector<double>& vy) {
  if (b.i0 < 0 || b.j0 < 0 || b.i1 >= g.nx() || b.j1 >= g.ny() || b.i0 >= b.i1 || b.j0 >= b.j1) return {};
  std::vector<std::size_t> loop;
  for (int i = b.i0; i < b.i1; ++i) loop.push_back(g.index(i, b.j0));
  for (int j = b.j0; j < b.j1; ++j) loop.push_back(g.index(b.i1, j));
  for (int i = b.i1; i > b.i0; --i) loop.push_back(g.index(i, b.j1));
  for (int j = b.j1; j > b.j0; --j) loop.push_back(g.index(b.i0, j));
  double total = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const std::size_t p = loop[k];
    const std::size_t q = loop[(k + 1) % loop.size()];
    if (!valid[p] || !valid[q]) return {};
    if ((vx[p] == 0.0 && vy[p] == 0.0) || (vx[q] == 0.0 && vy[q] == 0.0)) return {};
    double d = std::atan2(vy[q], vx[q]) - std::atan2(vy[p], vx[p]);
    while (d > kPi) d -= 2.0 * kPi;
    while (d <= -kPi) d += 2.0 * kPi;
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

bool crosses(double a, double b, double c, double d) {
  const double lo = std::min(std::min(a, b), std::min(c, d));
  const double hi = std::max(std::max(a, b), std::max(c, d));
  return lo <= 0.0 && hi >= 0.0;
}

}  // namespace

CriticalPointReport count_critical_points_graph(const HeightField& f, const FoliationFunction& fol,
                                                const GraphCountOptions& opt) {
  CriticalPointReport rep;
  rep.cluster_radius = opt.cluster_radius;
  if (fol.kind() == FoliationFunction::Kind::VerticalPlane) {
    rep.notes.push_back("a graph has no vertical tangent planes");
    return rep;
  }
  const GridDomain& g = f.domain();
  const Gradient du = central_gradient(f);
  std::vector<char> valid(g.size(), 0);
  std::vector<double> vx(g.size(), 0.0), vy(g.size(), 0.0);
  std::size_t dropped = 0;
  double vmax = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (g.tag(k) != NodeTag::Interior) continue;
      if (!fol.defined(g.x(i), g.y(j))) {
        ++dropped;
        continue;
      }
      const Vec2 dh = fol.grad_h(g.x(i), g.y(j));
      vx[k] = du.ux[k] - dh.x;
      vy[k] = du.uy[k] - dh.y;
      valid[k] = 1;
      vmax = std::max(vmax, std::hypot(vx[k], vy[k]));
    }
  }
  if (dropped > 0) {
    std::ostringstream msg;
    msg << "foliation undefined at " << dropped << " interior nodes; count restricted to the overlap";
    rep.notes.push_back(msg.str());
  }
  if (std::none_of(valid.begin(), valid.end(), [](char c) { return c != 0; })) {
    rep.error = "foliation and surface do not overlap";
    return rep;
  }
  if (vmax < opt.coincidence_tol) {
    rep.error = "leaf coincidence";
    return rep;
  }

  // Sign-change cells, identified by their lower-left node.
  std::vector<std::pair<int, int>> cells;
  std::map<std::pair<int, int>, int> cell_id;
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const std::size_t a = g.index(i, j), b = g.index(i + 1, j), c = g.index(i, j + 1), d = g.index(i + 1, j + 1);
      if (!valid[a] || !valid[b] || !valid[c] || !valid[d]) continue;
      if (crosses(vx[a], vx[b], vx[c], vx[d]) && crosses(vy[a], vy[b], vy[c], vy[d])) {
        cell_id[{i, j}] = static_cast<int>(cells.size());
        cells.emplace_back(i, j);
      }
    }
  }
  UnionFind uf(static_cast<int>(cells.size()));
  const int R = opt.cluster_radius;
  for (std::size_t n = 0; n < cells.size(); ++n) {
    const auto [i, j] = cells[n];
    for (int dj = -R; dj <= R; ++dj) {
      for (int di = -R; di <= R; ++di) {
        const auto it = cell_id.find({i + di, j + dj});
        if (it != cell_id.end()) uf.unite(static_cast<int>(n), it->second);
      }
    }
  }
  std::map<int, std::vector<std::size_t>> clusters;
  for (std::size_t n = 0; n < cells.size(); ++n) clusters[uf.find(static_cast<int>(n))].push_back(n);

  std::vector<Box> loops;
  int zero_winding = 0;
  for (const auto& [root, members] : clusters) {
    Box cb{g.nx(), -1, g.ny(), -1};
    double sx = 0.0, sy = 0.0;
    for (std::size_t n : members) {
      const auto [i, j] = cells[n];
      cb.i0 = std::min(cb.i0, i);
      cb.i1 = std::max(cb.i1, i);
      cb.j0 = std::min(cb.j0, j);
      cb.j1 = std::max(cb.j1, j);
      sx += g.x(i) + 0.5 * g.dx();
      sy += g.y(j) + 0.5 * g.dy();
    }
    std::optional<int> w;
    Box used{};
    for (int grow : {1, 0, 2}) {
      used = Box{cb.i0 - grow, cb.i1 + 1 + grow, cb.j0 - grow, cb.j1 + 1 + grow};
      w = winding(used, g, valid, vx, vy);
      if (w) break;
    }
    CriticalPoint p;
    p.cells = static_cast<int>(members.size());
    p.x = sx / static_cast<double>(members.size());
    p.y = sy / static_cast<double>(members.size());
    p.xmin = g.x(cb.i0);
    p.xmax = g.x(cb.i1 + 1);
    p.ymin = g.y(cb.j0);
    p.ymax = g.y(cb.j1 + 1);
    const int ni = std::clamp(static_cast<int>(std::lround((p.x - g.x0()) / g.dx())), 0, g.nx() - 1);
    const int nj = std::clamp(static_cast<int>(std::lround((p.y - g.y0()) / g.dy())), 0, g.ny() - 1);
    p.z = f(ni, nj);
    if (!w) {
      rep.unresolved_cluster = true;
      p.multiplicity = 1;
    } else {
      p.multiplicity = std::abs(*w);
    }
    if (p.multiplicity == 0) {
      ++zero_winding;
      continue;
    }
    for (const Box& o : loops) {
      if (!(used.i1 < o.i0 || o.i1 < used.i0 || used.j1 < o.j0 || o.j1 < used.j0)) rep.overlapping_clusters = true;
    }
    loops.push_back(used);
    rep.points.push_back(p);
    rep.total += p.multiplicity;
  }
  if (zero_winding > 0) {
    std::ostringstream msg;
    msg << zero_winding << " sign-change cluster(s) with zero winding number ignored";
    rep.notes.push_back(msg.str());
  }
  if (rep.overlapping_clusters) rep.notes.push_back("winding loops of distinct clusters overlap");
  return rep;
}

CriticalPointReport count_critical_points_rotational(const ProfileCurve& c, const FoliationFunction& fol) {
  if (fol.kind() != FoliationFunction::Kind::VerticalPlane) {
    throw std::invalid_argument("rotational count supports vertical-plane foliations only");
  }
  CriticalPointReport rep;
  const Vec2 v = fol.direction();
  auto add = [&](double r, double z) {
    for (double sgn : {1.0, -1.0}) rep.points.push_back({sgn * r * v.x, sgn * r * v.y, z, 1, 0, sgn * r * v.x, sgn * r * v.x, sgn * r * v.y,
                            sgn * r * v.y});
    rep.total += 2;
  };
  // Horizontal normals: cos(theta) = 0. Exact-ish zeros first, then sign
  // changes strictly between samples.
  const std::size_t n = c.s.size();
  std::vector<char> zero(n, 0);
  for (std::size_t k = 0; k < n; ++k) zero[k] = std::abs(std::cos(c.theta[k])) < 1e-12;
  for (std::size_t k = 0; k < n; ++k) {
    if (zero[k] && (k == 0 || !zero[k - 1])) add(c.r[k], c.z[k]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (zero[k] || zero[k + 1]) continue;
    const double a = std::cos(c.theta[k]);
    const double b = std::cos(c.theta[k + 1]);
    if ((a < 0.0) != (b < 0.0)) {
      const double w = a / (a - b);
      add(c.r[k] + w * (c.r[k + 1] - c.r[k]), c.z[k] + w * (c.z[k + 1] - c.z[k]));
    }
  }
  return rep;
}

CriticalPointReport count_critical_points_rotational(const RadialProfile& p, const FoliationFunction& fol) {
  if (fol.kind() != FoliationFunction::Kind::VerticalPlane) {
    throw std::invalid_argument("rotational count supports vertical-plane foliations only");
  }
  CriticalPointReport rep;
  for (double s : p.du) {
    if (!std::isfinite(s)) throw std::runtime_error("bowl profile has a vertical tangent");
  }
  rep.notes.push_back("entire graph: no horizontal normals");
  return rep;
}

RhsReport morse_rado_rhs(const std::vector<BoundaryCurve>& boundary, const FoliationFunction& fol,
                         int euler_char, const std::vector<bool>& also_surface_minimum) {
  RhsReport rep;
  rep.euler_char = euler_char;
  if (fol.kind() == FoliationFunction::Kind::GraphFamily) {
    if (boundary.size() != 2) {
      throw std::invalid_argument("graph-family boundary count is only available for annuli (two nested curves)");
    }
    rep.rhs = 8;
    rep.imported = true;
    return rep;
  }
  const Vec2 v = fol.direction();
  for (const BoundaryCurve& c : boundary) {
    if (!(c.hx > 0.0) || !(c.hy > 0.0)) throw std::invalid_argument("boundary curve needs positive half-sizes");
    if (c.kind == BoundaryCurve::Kind::Rectangle) {
      const double deg = std::atan2(std::abs(v.y), std::abs(v.x)) * 180.0 / kPi;  // in [0, 90]
      if (deg < 1.0 || deg > 89.0) {
        throw std::invalid_argument("direction within 1 degree of a rectangle edge: the minimum set is a segment");
      }
      // The unique minimizing corner.
      rep.minima.push_back({c.cx - std::copysign(c.hx, v.x), c.cy - std::copysign(c.hy, v.y)});
    } else {
      const double n = std::hypot(c.hx * v.x, c.hy * v.y);
      rep.minima.push_back({c.cx - c.hx * c.hx * v.x / n, c.cy - c.hy * c.hy * v.y / n});
    }
  }
  rep.q_count = static_cast<int>(rep.minima.size());
  if (!also_surface_minimum.empty()) {
    if (also_surface_minimum.size() != rep.minima.size()) {
      throw std::invalid_argument("need one surface-minimum flag per boundary minimum");
    }
    rep.a_count = static_cast<int>(std::count(also_surface_minimum.begin(), also_surface_minimum.end(), false));
  }
  rep.rhs = rep.q_count - rep.a_count - euler_char;
  return rep;
}

void write_report_csv(const std::filesystem::path& path, const CriticalPointReport& rep,
                      const std::optional<RhsReport>& rhs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "kind,x,y,z,multiplicity\n";
  for (const CriticalPoint& p : rep.points) {
    out << "point," << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(p.z) << ','
        << p.multiplicity << '\n';
  }
  out << "total,,,," << rep.total << '\n';
  if (rhs) out << "rhs,,,," << rhs->rhs << '\n';
}

}  // namespace translab
