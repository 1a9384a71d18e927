// Uniform planar grids with an Interior/Boundary/Exterior mask, and height
// fields sampled on them.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace translab {

enum class NodeTag : std::uint8_t { Interior, Boundary, Exterior };

/// The rectangle [-L, L] x [-b, b].
struct RectangleShape {
  double L = 0.0;
  double b = 0.0;
};

/// [-A, A] x [-B, B] minus the open rectangle (-a, a) x (-b, b).
struct AnnulusShape {
  double a = 0.0;
  double b = 0.0;
  double A = 0.0;
  double B = 0.0;
};

using ShapeMeta = std::variant<RectangleShape, AnnulusShape>;

std::string describe(const ShapeMeta& shape);

/// Closed-region membership of a point in the continuous shape.
bool shape_contains(const ShapeMeta& shape, double x, double y);

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Uniform grid of nx * ny nodes starting at (x0, y0), with a node mask
/// derived from `shape`. Immutable after construction.
class GridDomain {
 public:
  /// Builds the mask geometrically from the layout. Nodes must land on every
  /// edge of the shape; throws std::invalid_argument otherwise.
  static GridDomain from_layout(int nx, int ny, double x0, double y0, double dx, double dy,
                                ShapeMeta shape);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  const ShapeMeta& shape() const { return shape_; }

  std::size_t size() const { return mask_.size(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(i);
  }
  double x(int i) const { return x0_ + i * dx_; }
  double y(int j) const { return y0_ + j * dy_; }
  NodeTag tag(int i, int j) const { return mask_[index(i, j)]; }
  NodeTag tag(std::size_t k) const { return mask_[k]; }
  std::span<const NodeTag> mask() const { return mask_; }

  std::size_t count(NodeTag t) const;

  /// Node sitting on (0, 0), if the grid has one.
  std::optional<NodeIndex> origin_node() const;

  /// True when node (i, j) mirrors onto node (nx-1-i, j) and (i, ny-1-j)
  /// about the origin.
  bool symmetric_about_origin() const;

 private:
  GridDomain() = default;

  int nx_ = 0;
  int ny_ = 0;
  double x0_ = 0.0;
  double y0_ = 0.0;
  double dx_ = 0.0;
  double dy_ = 0.0;
  ShapeMeta shape_;
  std::vector<NodeTag> mask_;
};

/// Rectangle [-L, L] x [-b, b] on an odd nx * ny grid centered at the origin.
GridDomain make_rectangle_domain(double L, double b, int nx, int ny);

/// Rectangular annulus between the rectangles of half-sides (a, b) and (A, B).
/// The spacings 2A/(nx-1) and 2B/(ny-1) must divide a, A and b, B.
GridDomain make_annular_domain(double a, double b, double A, double B, int nx, int ny);

/// Heights on a GridDomain. Exterior nodes hold NaN; all other nodes are
/// finite. Boundary nodes carry the Dirichlet data.
class HeightField {
 public:
  HeightField(GridDomain domain, std::vector<double> values);

  static HeightField zero(const GridDomain& domain);
  static HeightField constant(const GridDomain& domain, double c);
  /// Samples f(x, y) at every non-Exterior node.
  static HeightField sample(const GridDomain& domain,
                            const std::function<double(double, double)>& f);

  const GridDomain& domain() const { return domain_; }
  double operator()(int i, int j) const { return values_[domain_.index(i, j)]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

  /// Dirichlet data in node order (row-major over Boundary nodes).
  std::vector<double> boundary_values() const;

  /// Copy with every non-Exterior value shifted by c.
  HeightField shifted(double c) const;

 private:
  GridDomain domain_;
  std::vector<double> values_;
};

}  // namespace translab
