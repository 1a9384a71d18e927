// Minimal foliation functions and tangency counts of computed surfaces with
// their leaves, plus the boundary count |Q| - |A| - chi that bounds them.
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "translab/closed_forms.hpp"
#include "translab/grid.hpp"
#include "translab/ode_solitons.hpp"

namespace translab {

/// Either F_v(p) = v.p for a horizontal unit vector v, or
/// H(x, y, z) = z - h(x, y) for a complete translating graph h.
class FoliationFunction {
 public:
  enum class Kind { VerticalPlane, GraphFamily };

  /// v is normalized; throws std::invalid_argument for a zero vector.
  static FoliationFunction vertical_plane(double vx, double vy);
  /// h = fam evaluated in coordinates rotated by `angle` (radians): the
  /// strip of fam is turned so that its axis points along
  /// (cos angle, sin angle).
  static FoliationFunction closed_form(const ClosedFormFamily& fam, double angle = 0.0);
  /// h = -u(|p|), the bowl in this library's orientation.
  static FoliationFunction bowl(std::shared_ptr<const RadialProfile> profile);

  Kind kind() const { return kind_; }
  Vec2 direction() const { return v_; }
  std::string describe() const;

  /// Is h defined at (x, y)? Always true for vertical planes.
  bool defined(double x, double y) const;
  double h(double x, double y) const;
  Vec2 grad_h(double x, double y) const;
  double operator()(double x, double y, double z) const;

 private:
  FoliationFunction() = default;
  Kind kind_ = Kind::VerticalPlane;
  Vec2 v_{1.0, 0.0};
  std::optional<ClosedFormFamily> fam_;
  double angle_ = 0.0;
  std::shared_ptr<const RadialProfile> bowl_;
};

struct CriticalPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int multiplicity = 0;
  /// Sign-change cells merged into this cluster.
  int cells = 0;
  /// Closed extent of the cluster's cells.
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool contains(double px, double py) const { return px >= xmin && px <= xmax && py >= ymin && py <= ymax; }
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;
  int total = 0;
  int cluster_radius = 3;
  /// Non-empty when no count could be produced (e.g. "leaf coincidence").
  std::string error;
  /// Remarks such as the foliation being restricted to part of the domain.
  std::vector<std::string> notes;
  /// A cluster's winding loop left the usable region; its multiplicity is a
  /// lower bound of 1.
  bool unresolved_cluster = false;
  /// Two clusters' winding loops overlap: the clustering radius is too
  /// coarse for this field.
  bool overlapping_clusters = false;
  bool ok() const { return error.empty(); }
};

struct GraphCountOptions {
  int cluster_radius = 3;      // Chebyshev distance between cells, in cells
  double coincidence_tol = 1e-8;  // max |Du - Dh| below which leaves coincide
};

/// Tangencies of the graph of f with the leaves of `fol`. Vertical planes
/// are never tangent to a graph, so that case returns 0. For a graph
/// family, tangencies are zeros of Du - Dh (central differences at Interior
/// nodes): cells where both components change sign are clustered, and each
/// cluster counts with multiplicity |winding number| of Du - Dh around its
/// enlarged bounding box.
CriticalPointReport count_critical_points_graph(const HeightField& f, const FoliationFunction& fol,
                                                const GraphCountOptions& opt = {});

/// Tangencies of the surface of revolution of `c` with the planes v.p =
/// const: horizontal normals parallel to v, i.e. the points r(s) (+-v) at
/// every s where cos theta vanishes.
CriticalPointReport count_critical_points_rotational(const ProfileCurve& c, const FoliationFunction& fol);
/// The bowl is an entire graph: no horizontal normals.
CriticalPointReport count_critical_points_rotational(const RadialProfile& p, const FoliationFunction& fol);

/// Closed convex curve in {z = 0}: an axis-aligned rectangle or an ellipse
/// with semi-axes (hx, hy), centered at (cx, cy).
struct BoundaryCurve {
  enum class Kind { Rectangle, Ellipse };
  Kind kind = Kind::Ellipse;
  double cx = 0.0;
  double cy = 0.0;
  double hx = 1.0;
  double hy = 1.0;
};

struct RhsReport {
  int q_count = 0;
  int a_count = 0;
  int euler_char = 0;
  int rhs = 0;
  std::vector<Vec2> minima;
  /// The bound was taken as a known constant rather than counted.
  bool imported = false;
};

/// |Q| - |A| - chi. For a vertical-plane foliation each curve contributes
/// one minimum of F_v; rectangles need v at least 1 degree away from both
/// edge directions (std::invalid_argument otherwise). `also_surface_minimum`
/// holds one flag per minimum, in curve order; A counts the minima whose
/// flag is false. An empty vector means all true.
///
/// For a graph-family foliation over two nested curves the bound 8 is
/// returned as an imported constant; other graph-family inputs throw.
RhsReport morse_rado_rhs(const std::vector<BoundaryCurve>& boundary, const FoliationFunction& fol,
                         int euler_char, const std::vector<bool>& also_surface_minimum = {});

/// CSV: x, y, z, multiplicity per point, followed by a `total` row and, if
/// given, an `rhs` row.
void write_report_csv(const std::filesystem::path& path, const CriticalPointReport& rep,
                      const std::optional<RhsReport>& rhs = std::nullopt);

}  // namespace translab
