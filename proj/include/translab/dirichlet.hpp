// Zero-boundary Dirichlet problem for translating graphs on rectangles and
// rectangular annuli: continuation in t through the metrics e^{-tz} delta,
// damped Newton at each t.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "translab/grid.hpp"

namespace translab {

struct SolverConfig {
  double newton_tol = 1e-10;   // max-norm of the residual
  int max_newton_iters = 50;   // per continuation step
  double damping = 1.0;        // initial Newton step fraction
  int continuation_steps = 10; // uniform t-grid 0 = t_0 < ... < t_K = 1
  double linear_tol = 1e-10;   // relative residual of the inner linear solve
  double divergence_height = 1e6;
  int max_halvings = 10;       // t-step bisections allowed per step

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct ContinuationStep {
  double t = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;
};

struct Solution {
  HeightField field;
  bool converged = false;
  /// Max-norm of divergence_residual(field, t_reached) over Interior nodes.
  double residual_norm = 0.0;
  double t_reached = 0.0;
  /// Newton iterations summed over all accepted and rejected attempts.
  int iterations = 0;
  /// u(0, 0) when the grid has that node, NaN otherwise.
  double center_height = 0.0;
  bool height_blowup = false;
  std::vector<ContinuationStep> steps;
  std::string message;
};

/// Solves div(Du/W) + t/W = 0 on Interior nodes with u = 0 on Boundary
/// nodes, continuing from t = 0 (u = 0) to t = 1. The discretization is the
/// finite-volume form of divergence_residual, linearized exactly and solved
/// by sparse LU. Never throws on numerical failure: the returned Solution is
/// marked not converged with t_reached < 1 and a message.
Solution solve(const GridDomain& domain, const SolverConfig& cfg = {});

/// Annular region between the rectangles (a, b) and (A, B).
Solution solve_annulus_family(double a, double b, double A, double B, int nx, int ny,
                              const SolverConfig& cfg = {});

struct OrderingReport {
  double min_difference = 0.0;    // min over shared nodes of hi - lo
  NodeIndex argmin{};             // in lo's indexing
  std::size_t shared_nodes = 0;
  std::vector<NodeIndex> violations;  // nodes of lo with hi - lo < -tolerance
};

/// Compares two fields on the Interior nodes of `lo`, which must all be
/// non-Exterior nodes of `hi` (same spacings, node-aligned offsets).
/// Throws std::invalid_argument for non-nested grids.
OrderingReport compare_fields(const HeightField& lo, const HeightField& hi, double tolerance = 0.0);
OrderingReport compare_fields(const Solution& lo, const Solution& hi, double tolerance = 0.0);

/// Discrete argmax over non-Exterior nodes. Ties go to the node nearest the
/// origin: order by (|x|, |y|, x, y).
NodeIndex argmax_node(const HeightField& f);
NodeIndex argmax_node(const Solution& sol);

struct SymmetryReport {
  double x_asymmetry = 0.0;  // max |u(x, y) - u(-x, y)|
  double y_asymmetry = 0.0;  // max |u(x, y) - u(x, -y)|
  double max() const { return x_asymmetry > y_asymmetry ? x_asymmetry : y_asymmetry; }
};

/// Compares mirrored nodes; requires a grid symmetric about the origin.
SymmetryReport symmetrize_check(const HeightField& f);
SymmetryReport symmetrize_check(const Solution& sol);

/// Writes `converged`, `residual_norm`, `t_reached`, `iterations`,
/// `center_height` (plus `height_blowup`) one `key = value` per line.
void write_solution_metadata(const std::filesystem::path& path, const Solution& sol);

}  // namespace translab
