// Finite-volume stencil shared by the residual operator and the Newton
// solver. Evaluation order is arranged so that mirroring the input about
// x = 0 or y = 0 mirrors the output bit for bit.
#pragma once

#include <array>
#include <cmath>

namespace translab::detail {

/// Values of the 3x3 neighbourhood, v[dj+1][di+1] = u(i+di, j+dj).
using Patch = std::array<std::array<double, 3>, 3>;

struct FaceValue {
  double flux = 0.0;   // normal component of Du/W
  double inv_w = 0.0;  // 1/W on the face
  // Partial derivatives with respect to patch entries.
  Patch dflux{};
  Patch dinv_w{};
};

// Face between the patch center and the neighbour in direction (ox, oy),
// one of (+-1, 0) or (0, +-1). `hn` is the spacing along the normal, `ht`
// across it.
inline FaceValue face(const Patch& v, int ox, int oy, double hn, double ht, bool want_derivs) {
  FaceValue out;
  // Normal difference, oriented along (ox, oy).
  const double c = v[1][1];
  const double n = v[1 + oy][1 + ox];
  const double p_raw = (n - c) / hn;
  // Transverse difference across the face: average of the two transverse
  // central differences at the face's endpoints.
  double hi_a, hi_b, lo_a, lo_b;
  int tx, ty;  // transverse unit offset
  if (ox != 0) {
    tx = 0;
    ty = 1;
  } else {
    tx = 1;
    ty = 0;
  }
  hi_a = v[1 + ty][1 + tx];
  hi_b = v[1 + oy + ty][1 + ox + tx];
  lo_a = v[1 - ty][1 - tx];
  lo_b = v[1 + oy - ty][1 + ox - tx];
  const double q = ((hi_a + hi_b) - (lo_a + lo_b)) / (4.0 * ht);
  const double p = p_raw;
  const double w2 = 1.0 + p * p + q * q;
  const double inv_w = 1.0 / std::sqrt(w2);
  out.flux = p * inv_w;
  out.inv_w = inv_w;
  if (!want_derivs) return out;

  const double a3 = inv_w * inv_w * inv_w;
  const double dF_dp = (1.0 + q * q) * a3;
  const double dF_dq = -p * q * a3;
  const double da_dp = -p * a3;
  const double da_dq = -q * a3;
  auto add = [&](int di, int dj, double dp, double dq) {
    out.dflux[1 + dj][1 + di] += dF_dp * dp + dF_dq * dq;
    out.dinv_w[1 + dj][1 + di] += da_dp * dp + da_dq * dq;
  };
  add(0, 0, -1.0 / hn, 0.0);
  add(ox, oy, 1.0 / hn, 0.0);
  const double tq = 1.0 / (4.0 * ht);
  add(tx, ty, 0.0, tq);
  add(ox + tx, oy + ty, 0.0, tq);
  add(-tx, -ty, 0.0, -tq);
  add(ox - tx, oy - ty, 0.0, -tq);
  return out;
}

struct NodeResidual {
  double value = 0.0;
  Patch jac{};
};

/// Residual of div(Du/W) + t/W at the patch center.
inline NodeResidual fv_residual(const Patch& v, double dx, double dy, double t, bool want_jac) {
  const FaceValue e = face(v, 1, 0, dx, dy, want_jac);
  const FaceValue w = face(v, -1, 0, dx, dy, want_jac);
  const FaceValue n = face(v, 0, 1, dy, dx, want_jac);
  const FaceValue s = face(v, 0, -1, dy, dx, want_jac);
  // The west and south faces are oriented outward, so their fluxes enter
  // with a plus sign: div ~ (F_e + F_w)/dx + (F_n + F_s)/dy.
  const double div = (e.flux + w.flux) / dx + (n.flux + s.flux) / dy;
  const double src = ((e.inv_w + w.inv_w) + (n.inv_w + s.inv_w)) * 0.25;
  NodeResidual r;
  r.value = div + t * src;
  if (want_jac) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        r.jac[a][b] = (e.dflux[a][b] + w.dflux[a][b]) / dx + (n.dflux[a][b] + s.dflux[a][b]) / dy +
                      t * 0.25 * ((e.dinv_w[a][b] + w.dinv_w[a][b]) + (n.dinv_w[a][b] + s.dinv_w[a][b]));
      }
    }
  }
  return r;
}

}  // namespace translab::detail
