// Discrete differential operators for graphs z = u(x, y): the translator
// residual family for the metrics e^{-tz} delta, and the Ilmanen area.
//
// Orientation: a translator here moves by -e3 under mean curvature flow, so
// the grim reaper z = log(cos y) is an exact solution. In graph form the
// t-family reads
//
//   (1+u_y^2) u_xx - 2 u_x u_y u_xy + (1+u_x^2) u_yy + t (1+|Du|^2) = 0,
//
// equivalently div(Du/W) + t/W = 0 with W = sqrt(1+|Du|^2). t = 0 is the
// minimal surface equation, t = 1 the translator equation.
#pragma once

#include <vector>

#include "translab/grid.hpp"

namespace translab {

/// Per-node values on a grid; NaN wherever the quantity is undefined.
using NodeValues = std::vector<double>;

/// Strong-form residual with second-order central differences (4-point
/// corner stencil for u_xy). Defined on Interior nodes only.
NodeValues translator_residual(const HeightField& f, double t);

/// Conservative finite-volume residual of div(Du/W) + t/W at Interior nodes.
///
/// Face fluxes use the one-sided normal difference and a 4-point transverse
/// difference; the source 1/W is the average of 1/W over the four faces of
/// the control volume. For smooth fields this approximates
/// translator_residual / W^3 to second order. This is the form the
/// Dirichlet solver drives to zero.
NodeValues divergence_residual(const HeightField& f, double t);

/// Area of the graph in the Ilmanen metric e^{-z} delta: midpoint rule over
/// cells whose four corners are Interior or Boundary and whose center lies in
/// the region.
double ilmanen_area(const HeightField& f);

struct Gradient {
  NodeValues ux;
  NodeValues uy;
};

/// Central-difference gradient at Interior nodes (NaN elsewhere).
Gradient central_gradient(const HeightField& f);

/// max |v| over finite entries; 0 when there are none.
double max_abs(const NodeValues& v);

}  // namespace translab
