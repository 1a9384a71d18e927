#include "translab/dirichlet.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fv_stencil.hpp"
#include "translab/field_io.hpp"

namespace translab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Newton machinery for one domain. Unknowns are the Interior nodes in node
// order; Boundary nodes stay at zero.
class NewtonSystem {
 public:
  explicit NewtonSystem(const GridDomain& g) : g_(g) {
    unknown_.assign(g.size(), -1);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.tag(k) == NodeTag::Interior) {
        unknown_[k] = static_cast<int>(node_.size());
        node_.push_back(k);
      }
    }
    build_pattern();
  }

  std::size_t unknowns() const { return node_.size(); }

  // Residual max-norm at (u, t); fills r when non-null.
  double residual(const std::vector<double>& u, double t, Eigen::VectorXd* r) const {
    double norm = 0.0;
    for (std::size_t n = 0; n < node_.size(); ++n) {
      const double v = detail::fv_residual(patch(u, node_[n]), g_.dx(), g_.dy(), t, false).value;
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      norm = std::max(norm, std::abs(v));
      if (r) (*r)[static_cast<Eigen::Index>(n)] = v;
    }
    return norm;
  }

  void assemble(const std::vector<double>& u, double t, Eigen::VectorXd& r) {
    double* values = jac_.valuePtr();
    for (std::size_t n = 0; n < node_.size(); ++n) {
      const auto nr = detail::fv_residual(patch(u, node_[n]), g_.dx(), g_.dy(), t, true);
      r[static_cast<Eigen::Index>(n)] = nr.value;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const int slot = slot_[9 * n + 3 * a + b];
          if (slot >= 0) values[slot] = nr.jac[a][b];
        }
      }
    }
  }

  const SpMat& jacobian() const { return jac_; }
  std::size_t node(std::size_t n) const { return node_[n]; }

 private:
  detail::Patch patch(const std::vector<double>& u, std::size_t k) const {
    const int i = static_cast<int>(k % static_cast<std::size_t>(g_.nx()));
    const int j = static_cast<int>(k / static_cast<std::size_t>(g_.nx()));
    detail::Patch p{};
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) p[1 + dj][1 + di] = u[g_.index(i + di, j + dj)];
    }
    return p;
  }

  void build_pattern() {
    const auto n_unk = static_cast<Eigen::Index>(node_.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * node_.size());
    auto each = [&](auto&& fn) {
      for (std::size_t n = 0; n < node_.size(); ++n) {
        const int i = static_cast<int>(node_[n] % static_cast<std::size_t>(g_.nx()));
        const int j = static_cast<int>(node_[n] / static_cast<std::size_t>(g_.nx()));
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            const int col = unknown_[g_.index(i + b - 1, j + a - 1)];
            fn(n, a, b, col);
          }
        }
      }
    };
    each([&](std::size_t n, int, int, int col) {
      if (col >= 0) trip.emplace_back(static_cast<int>(n), col, 1.0);
    });
    jac_.resize(n_unk, n_unk);
    jac_.setFromTriplets(trip.begin(), trip.end());
    jac_.makeCompressed();
    slot_.assign(9 * node_.size(), -1);
    each([&](std::size_t n, int a, int b, int col) {
      if (col >= 0) {
        slot_[9 * n + 3 * a + b] =
            static_cast<int>(&jac_.coeffRef(static_cast<int>(n), col) - jac_.valuePtr());
      }
    });
  }

  const GridDomain& g_;
  std::vector<int> unknown_;
  std::vector<std::size_t> node_;
  std::vector<int> slot_;
  SpMat jac_;
};

enum class StepOutcome { Converged, Failed, BlowUp };

struct StepResult {
  StepOutcome outcome = StepOutcome::Failed;
  int iterations = 0;
  double residual_norm = 0.0;
  std::string why;
};

double max_height(const std::vector<double>& u, const GridDomain& g) {
  double m = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (g.tag(k) != NodeTag::Exterior) m = std::max(m, std::abs(u[k]));
  }
  return m;
}

class Solver {
 public:
  Solver(const GridDomain& g, const SolverConfig& cfg) : g_(g), cfg_(cfg), sys_(g) {
    if (sys_.unknowns() > 0) lu_.analyzePattern(sys_.jacobian());
  }

  // Newton at fixed t starting from u; u is left at the last iterate.
  StepResult newton(std::vector<double>& u, double t) {
    StepResult out;
    const auto n = static_cast<Eigen::Index>(sys_.unknowns());
    Eigen::VectorXd r(n), delta(n), r_trial(n);
    double norm = sys_.residual(u, t, nullptr);
    std::vector<double> trial(u.size());
    for (;;) {
      out.residual_norm = norm;
      if (norm <= cfg_.newton_tol) {
        out.outcome = StepOutcome::Converged;
        return out;
      }
      if (out.iterations >= cfg_.max_newton_iters) {
        out.why = "Newton iteration limit reached";
        return out;
      }
      ++out.iterations;
      sys_.assemble(u, t, r);
      lu_.factorize(sys_.jacobian());
      if (lu_.info() != Eigen::Success) {
        out.why = "singular Jacobian";
        return out;
      }
      delta = lu_.solve(-r);
      const double rel = (sys_.jacobian() * delta + r).norm() / std::max(r.norm(), 1e-300);
      if (!(rel <= cfg_.linear_tol)) {
        // One step of iterative refinement before giving up.
        delta += lu_.solve(-(sys_.jacobian() * delta + r));
        const double rel2 = (sys_.jacobian() * delta + r).norm() / std::max(r.norm(), 1e-300);
        if (!(rel2 <= cfg_.linear_tol)) {
          std::ostringstream msg;
          msg << "linear solve relative residual " << rel2 << " above " << cfg_.linear_tol;
          out.why = msg.str();
          return out;
        }
      }
      // Backtracking on the max-norm: halve until any decrease.
      double step = cfg_.damping;
      bool accepted = false;
      for (int k = 0; k < 40; ++k) {
        trial = u;
        for (Eigen::Index m = 0; m < n; ++m) trial[sys_.node(static_cast<std::size_t>(m))] += step * delta[m];
        const double trial_norm = sys_.residual(trial, t, nullptr);
        if (trial_norm < norm) {
          u.swap(trial);
          norm = trial_norm;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        out.residual_norm = norm;
        out.why = "line search found no decrease";
        return out;
      }
      if (max_height(u, g_) > cfg_.divergence_height) {
        out.residual_norm = norm;
        out.outcome = StepOutcome::BlowUp;
        out.why = "height exceeded divergence_height";
        return out;
      }
    }
  }

  double residual_norm(const std::vector<double>& u, double t) const {
    return sys_.residual(u, t, nullptr);
  }

 private:
  const GridDomain& g_;
  const SolverConfig& cfg_;
  NewtonSystem sys_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(newton_tol >= 1e-13)) throw std::invalid_argument("newton_tol must be >= 1e-13");
  if (max_newton_iters < 1) throw std::invalid_argument("max_newton_iters must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (continuation_steps < 1) throw std::invalid_argument("continuation_steps must be >= 1");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("linear_tol must be positive");
  if (!(divergence_height > 0.0)) throw std::invalid_argument("divergence_height must be positive");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
}

Solution solve(const GridDomain& domain, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<double> u(domain.size(), 0.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (domain.tag(k) == NodeTag::Exterior) u[k] = kNaN;
  }

  Solver solver(domain, cfg);
  Solution sol{HeightField::zero(domain), false, 0.0, 0.0, 0, kNaN, false, {}, {}};
  const double dt0 = 1.0 / cfg.continuation_steps;

  auto finish = [&](double t) {
    sol.t_reached = t;
    sol.residual_norm = solver.residual_norm(u, t);
    sol.field = HeightField(domain, u);
    const auto o = domain.origin_node();
    sol.center_height = o ? u[domain.index(o->i, o->j)] : kNaN;
    return sol;
  };

  // t = 0: the zero field is exact, so this takes no iterations.
  {
    const StepResult r = solver.newton(u, 0.0);
    sol.iterations += r.iterations;
    sol.steps.push_back({0.0, r.iterations, r.outcome == StepOutcome::Converged, r.residual_norm});
    if (r.outcome != StepOutcome::Converged) {
      sol.message = "t = 0: " + r.why;
      return finish(0.0);
    }
  }

  double t = 0.0;
  double dt = dt0;
  int halvings = 0;
  std::vector<double> saved;
  while (t < 1.0) {
    // Land exactly on the uniform grid points and on 1.
    double t_try = t + dt;
    const double next_grid = std::min(1.0, (std::floor(t / dt0 + 1e-9) + 1.0) * dt0);
    if (t_try > next_grid - 1e-12) t_try = next_grid;

    saved = u;
    const StepResult r = solver.newton(u, t_try);
    sol.iterations += r.iterations;
    sol.steps.push_back({t_try, r.iterations, r.outcome == StepOutcome::Converged, r.residual_norm});
    if (r.outcome == StepOutcome::Converged) {
      t = t_try;
      halvings = 0;
      dt = std::min(dt0, 2.0 * dt);
      continue;
    }
    u = saved;
    std::ostringstream msg;
    msg << "t = " << t_try << ": " << r.why;
    if (r.outcome == StepOutcome::BlowUp) {
      sol.height_blowup = true;
      sol.message = msg.str();
      return finish(t);
    }
    if (++halvings > cfg.max_halvings) {
      msg << " (t-step bisection exhausted)";
      sol.message = msg.str();
      return finish(t);
    }
    dt *= 0.5;
  }
  finish(1.0);
  sol.converged = sol.residual_norm <= cfg.newton_tol;
  if (!sol.converged) sol.message = "final residual above tolerance";
  return sol;
}

Solution solve_annulus_family(double a, double b, double A, double B, int nx, int ny,
                              const SolverConfig& cfg) {
  return solve(make_annular_domain(a, b, A, B, nx, ny), cfg);
}

OrderingReport compare_fields(const HeightField& lo, const HeightField& hi, double tolerance) {
  const GridDomain& gl = lo.domain();
  const GridDomain& gh = hi.domain();
  auto same = [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(std::abs(p), std::abs(q)); };
  if (!same(gl.dx(), gh.dx()) || !same(gl.dy(), gh.dy())) {
    throw std::invalid_argument("compare_fields: grids have different spacings");
  }
  const double fi = (gl.x0() - gh.x0()) / gl.dx();
  const double fj = (gl.y0() - gh.y0()) / gl.dy();
  const double oi = std::round(fi);
  const double oj = std::round(fj);
  if (std::abs(fi - oi) > 1e-7 || std::abs(fj - oj) > 1e-7) {
    throw std::invalid_argument("compare_fields: grids are not node-aligned");
  }
  const int di = static_cast<int>(oi);
  const int dj = static_cast<int>(oj);

  OrderingReport rep;
  rep.min_difference = std::numeric_limits<double>::infinity();
  for (int j = 0; j < gl.ny(); ++j) {
    for (int i = 0; i < gl.nx(); ++i) {
      if (gl.tag(i, j) != NodeTag::Interior) continue;
      const int ih = i + di;
      const int jh = j + dj;
      if (ih < 0 || jh < 0 || ih >= gh.nx() || jh >= gh.ny() || gh.tag(ih, jh) == NodeTag::Exterior) {
        throw std::invalid_argument("compare_fields: lo's region is not contained in hi's region");
      }
      const double d = hi(ih, jh) - lo(i, j);
      ++rep.shared_nodes;
      if (d < rep.min_difference) {
        rep.min_difference = d;
        rep.argmin = {i, j};
      }
      if (d < -tolerance) rep.violations.push_back({i, j});
    }
  }
  if (rep.shared_nodes == 0) rep.min_difference = 0.0;
  return rep;
}

OrderingReport compare_fields(const Solution& lo, const Solution& hi, double tolerance) {
  return compare_fields(lo.field, hi.field, tolerance);
}

NodeIndex argmax_node(const HeightField& f) {
  const GridDomain& g = f.domain();
  std::optional<NodeIndex> best;
  double best_v = -std::numeric_limits<double>::infinity();
  auto key = [&](NodeIndex n) {
    const double x = g.x(n.i);
    const double y = g.y(n.j);
    return std::make_tuple(std::abs(x), std::abs(y), x, y);
  };
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) == NodeTag::Exterior) continue;
      const double v = f(i, j);
      const NodeIndex n{i, j};
      if (!best || v > best_v || (v == best_v && key(n) < key(*best))) {
        best = n;
        best_v = v;
      }
    }
  }
  if (!best) throw std::invalid_argument("argmax_node: field has no nodes");
  return *best;
}

NodeIndex argmax_node(const Solution& sol) { return argmax_node(sol.field); }

SymmetryReport symmetrize_check(const HeightField& f) {
  const GridDomain& g = f.domain();
  if (!g.symmetric_about_origin()) throw std::invalid_argument("symmetrize_check needs a grid symmetric about the origin");
  SymmetryReport rep;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) == NodeTag::Exterior) continue;
      const double v = f(i, j);
      rep.x_asymmetry = std::max(rep.x_asymmetry, std::abs(v - f(g.nx() - 1 - i, j)));
      rep.y_asymmetry = std::max(rep.y_asymmetry, std::abs(v - f(i, g.ny() - 1 - j)));
    }
  }
  return rep;
}

SymmetryReport symmetrize_check(const Solution& sol) { return symmetrize_check(sol.field); }

void write_solution_metadata(const std::filesystem::path& path, const Solution& sol) {
  write_key_values(path, {{"converged", sol.converged ? "true" : "false"},
                          {"residual_norm", format_real(sol.residual_norm)},
                          {"t_reached", format_real(sol.t_reached)},
                          {"iterations", std::to_string(sol.iterations)},
                          {"center_height", format_real(sol.center_height)},
                          {"height_blowup", sol.height_blowup ? "true" : "false"}});
}

}  // namespace translab
