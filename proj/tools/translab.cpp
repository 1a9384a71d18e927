// translab: command-line front end for the translator lab.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure (a FAILED file
// is left next to whatever artifacts were written).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "translab/acceptance.hpp"
#include "translab/closed_forms.hpp"
#include "translab/dirichlet.hpp"
#include "translab/field_io.hpp"
#include "translab/limit_lab.hpp"
#include "translab/morse_rado.hpp"
#include "translab/ode_solitons.hpp"
#include "translab/operators.hpp"
#include "translab/plots.hpp"

namespace fs = std::filesystem;
using namespace translab;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relative --out paths live under $TRANSLATOR_LAB_OUT when it is set.
fs::path output_dir(const std::string& out) {
  fs::path p(out);
  if (const char* root = std::getenv("TRANSLATOR_LAB_OUT"); root && *root && p.is_relative()) p = fs::path(root) / p;
  fs::create_directories(p);
  fs::remove(p / "FAILED");
  return p;
}

void mark_failed(const fs::path& dir, const std::string& why) {
  std::ofstream(dir / "FAILED", std::ios::binary) << why << '\n';
}

// Fills every option the command line left unset from `key = value` lines.
void apply_config(CLI::App& sub, const std::string& path) {
  KeyValues kv;
  try {
    kv = read_key_values(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  for (const auto& [key, value] : kv) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw UsageError("unknown config key '" + key + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

// The effective settings of a subcommand, in the config file format.
void write_effective_config(CLI::App& sub, const fs::path& dir) {
  std::ofstream out(dir / "config.txt", std::ios::binary);
  out << "# translab " << sub.get_name() << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out") continue;
    std::string value;
    const auto results = opt->results();
    if (!results.empty()) {
      for (const auto& r : results) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    if (value.empty()) continue;
    out << name << " = " << value << '\n';
  }
}

// Defaults shown in help and written to config.txt must round-trip exactly.
std::string text(double v) { return format_real(v); }
std::string text(int v) { return std::to_string(v); }
std::string text(const std::string& v) { return v; }
std::string text(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_real(x);
  return s;
}

void solver_options(CLI::App* sub, SolverConfig& cfg) {
  sub->add_option("--newton-tol", cfg.newton_tol, "Newton stopping tolerance (max-norm residual)")->default_str(text(cfg.newton_tol));
  sub->add_option("--max-newton-iters", cfg.max_newton_iters, "Newton iterations per continuation step")
      ->default_str(text(cfg.max_newton_iters));
  sub->add_option("--damping", cfg.damping, "initial Newton step length in (0, 1]")->default_str(text(cfg.damping));
  sub->add_option("--continuation-steps", cfg.continuation_steps, "uniform t-steps from 0 to 1")->default_str(text(cfg.continuation_steps));
  sub->add_option("--linear-tol", cfg.linear_tol, "relative residual of the linear solve")->default_str(text(cfg.linear_tol));
  sub->add_option("--max-halvings", cfg.max_halvings, "t-step halvings before giving up")->default_str(text(cfg.max_halvings));
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + format_real(x);
  return s;
}

struct Command {
  CLI::App* app = nullptr;
  std::string config;
  std::string out;
  std::function<int(const fs::path&)> run;
};

void common_options(Command& c, const std::string& default_out) {
  c.out = default_out;
  c.app->add_option("--config", c.config, "file of `key = value` lines; the command line wins");
  c.app->add_option("--out", c.out, "output directory")->default_str(text(c.config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translating solitons of mean curvature flow: solves, sweeps and checks"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  app.require_subcommand(1);
  std::vector<Command> commands;
  commands.reserve(8);  // options bind into the elements, so no reallocation
  SolverConfig solve_cfg, sweep_cfg, wing_cfg;

  // solve
  struct {
    std::string shape = "rect";
    double L = 4, b = 0.7853981633974483, a = 2, A = 2.5, B = 2.5;
    int nx = 129, ny = 33;
    int contours = 16;
  } so;
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("solve", "Dirichlet solve with zero boundary values");
    common_options(c, "solve");
    c.app->add_option("--shape", so.shape, "rect or annulus")->check(CLI::IsMember({"rect", "annulus"}))->default_str(text(so.shape));
    c.app->add_option("--L", so.L, "rectangle half-length / annulus outer x half-side")->default_str(text(so.L));
    c.app->add_option("--b", so.b, "rectangle half-height / annulus inner y half-side")->default_str(text(so.b));
    c.app->add_option("--a", so.a, "annulus inner x half-side")->default_str(text(so.a));
    c.app->add_option("--A", so.A, "annulus outer x half-side")->default_str(text(so.A));
    c.app->add_option("--B", so.B, "annulus outer y half-side")->default_str(text(so.B));
    c.app->add_option("--nx", so.nx, "nodes in x (odd)")->default_str(text(so.nx));
    c.app->add_option("--ny", so.ny, "nodes in y (odd)")->default_str(text(so.ny));
    c.app->add_option("--contours", so.contours, "contour levels in the SVG")->default_str(text(so.contours));
    solver_options(c.app, solve_cfg);
    c.run = [&so, &cfg = solve_cfg](const fs::path& dir) {
      const Solution sol = [&] {
        try {
          cfg.validate();
          return so.shape == "rect" ? solve(make_rectangle_domain(so.L, so.b, so.nx, so.ny), cfg)
                                    : solve_annulus_family(so.a, so.b, so.A, so.B, so.nx, so.ny, cfg);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      write_field(dir / "field.txt", sol.field);
      write_solution_metadata(dir / "meta.txt", sol);
      const NodeIndex m = argmax_node(sol);
      const GridDomain& g = sol.field.domain();
      write_contour_svg(dir / "contour.svg", sol.field, so.contours, "u on " + describe(g.shape()),
                        {{g.x(m.i), g.y(m.j), "max " + format_real(sol.field(m.i, m.j))}});
      std::cout << (sol.converged ? "converged" : "FAILED") << ": residual " << format_real(sol.residual_norm)
                << ", t reached " << format_real(sol.t_reached) << ", " << sol.iterations << " Newton iterations";
      if (std::isfinite(sol.center_height)) std::cout << ", u(0,0) = " << format_real(sol.center_height);
      std::cout << '\n';
      if (!sol.converged) throw NumericalFailure(sol.message);
      return 0;
    };
  }

  // sweep and deltawing share their flags.
  struct SweepFlags {
    double b = 0.7853981633974483;
    std::vector<double> Ls{2, 4, 8, 16};
    double W = 0.0;  // 0: default window
    double delta = 0.1;
    double dx = 0.125;
    int ny = 65;
  };
  SweepFlags sw, dw{3.141592653589793, {8, 16, 32}, 0.0, 0.1, 0.5, 65};
  auto sweep_options = [](Command& c, SweepFlags& f) {
    c.app->add_option("--b", f.b, "strip half-width")->default_str(text(f.b));
    c.app->add_option("--Ls", f.Ls, "increasing half-lengths, comma separated")->delimiter(',')->default_str(text(f.Ls));
    c.app->add_option("--W", f.W, "window half-length (0 picks the default)")->default_str(text(f.W));
    c.app->add_option("--delta", f.delta, "window margin from y = +-b")->default_str(text(f.delta));
    c.app->add_option("--dx", f.dx, "grid spacing in x; 2L/dx must be an even integer")->default_str(text(f.dx));
    c.app->add_option("--ny", f.ny, "nodes in y (odd)")->default_str(text(f.ny));
  };
  auto run_sweep_flags = [](const SweepFlags& f, const SolverConfig& cfg) {
    try {
      cfg.validate();
      const Window w = f.W > 0 ? Window{f.W, f.delta} : Window{default_window(f.Ls).W, f.delta};
      return run_sweep(f.b, f.Ls, w, SweepGrid{f.dx, f.ny}, cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  };
  auto sweep_outputs = [](const LimitSweep& s, const fs::path& dir) {
    write_sweep_csv(dir / "sweep.csv", s);
    std::vector<double> Ls(s.L_schedule.begin(), s.L_schedule.begin() + static_cast<long>(s.center_heights.size()));
    std::vector<Series> series{{"u_L(0,0)", Ls, s.center_heights, false}};
    if (s.b < kHalfPi) {
      series.push_back({"-log cos b", Ls, std::vector<double>(Ls.size(), -std::log(std::cos(s.b))), true});
    }
    write_line_plot_svg(dir / "center_height.svg", "center height, b = " + format_real(s.b), "L", "u(0,0)", series);
    std::cout << "center heights: " << join_values(s.center_heights) << '\n';
    std::cout << "increments: " << join_values(center_increments(s)) << '\n';
    std::cout << "classified as " << (center_unbounded(s) ? "unbounded" : "bounded")
              << " (last two increments against the 0.05 floor)\n";
  };
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("sweep", "Center heights of u_{L,b} over an L schedule");
    common_options(c, "sweep");
    sweep_options(c, sw);
    solver_options(c.app, sweep_cfg);
    c.run = [&, &cfg = sweep_cfg](const fs::path& dir) {
      const LimitSweep s = run_sweep_flags(sw, cfg);
      sweep_outputs(s, dir);
      KeyValues kv{{"complete", s.complete ? "true" : "false"},
                   {"monotone", s.monotone ? "true" : "false"},
                   {"center_unbounded", center_unbounded(s) ? "true" : "false"}};
      write_key_values(dir / "meta.txt", kv);
      if (!s.complete) throw NumericalFailure(s.diagnostic);
      return 0;
    };
  }
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("deltawing", "Renormalized limit for b > pi/2 and its tilt");
    common_options(c, "deltawing");
    sweep_options(c, dw);
    solver_options(c.app, wing_cfg);
    c.run = [&, &cfg = wing_cfg](const fs::path& dir) {
      if (!(dw.b > kHalfPi)) throw UsageError("deltawing needs b > pi/2");
      if (dw.Ls.size() < 3) throw UsageError("deltawing needs at least three L values");
      const LimitSweep s = run_sweep_flags(dw, cfg);
      sweep_outputs(s, dir);
      if (!s.complete || s.renormalized.size() < 3) throw NumericalFailure(s.diagnostic);
      const DeltaWingResult r = extract_delta_wing(s);
      write_field(dir / "limit_field.txt", r.limit_field);
      write_contour_svg(dir / "limit_field.svg", r.limit_field, 16, "renormalized limit, b = " + format_real(r.b),
                        {{0.0, 0.0, "apex"}});
      KeyValues kv{{"b", format_real(r.b)},
                   {"measured_tilt", format_real(r.tilt.tilt)},
                   {"expected_tilt", format_real(tilt_slope(r.b))},
                   {"left_slope", format_real(r.tilt.left_slope)},
                   {"right_slope", format_real(r.tilt.right_slope)},
                   {"fit_residual", format_real(r.tilt.fit_residual)},
                   {"tilt_reliable", r.tilt.reliable ? "true" : "false"},
                   {"cauchy_gap", format_real(r.cauchy_gap)},
                   {"center_unbounded", r.center_unbounded ? "true" : "false"},
                   {"non_convergent", r.non_convergent ? "true" : "false"}};
      write_key_values(dir / "deltawing.txt", kv);
      std::cout << "measured tilt " << format_real(r.tilt.tilt) << " (expected " << format_real(tilt_slope(r.b))
                << (r.tilt.reliable ? "" : ", fit UNRELIABLE") << "), cauchy gap " << format_real(r.cauchy_gap)
                << '\n';
      return 0;
    };
  }

  // bowl
  struct {
    double rmax = 4.0, h = 1e-3;
  } bo;
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("bowl", "Rotational bowl profile");
    common_options(c, "bowl");
    c.app->add_option("--rmax", bo.rmax, "outer radius")->default_str(text(bo.rmax));
    c.app->add_option("--h", bo.h, "integration step")->default_str(text(bo.h));
    c.run = [&bo](const fs::path& dir) {
      const RadialProfile p = [&] {
        try {
          return bowl_profile(bo.rmax, bo.h);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      write_bowl_csv(dir / "bowl.csv", p);
      Series s{"z = -U(r)", p.r, {}, false};
      for (double u : p.u) s.y.push_back(-u);
      write_line_plot_svg(dir / "bowl.svg", "bowl profile", "r", "z", {s});
      std::cout << "depth at r = " << format_real(p.r.back()) << ": " << format_real(p.u.back()) << '\n';
      return 0;
    };
  }

  // catenoid
  struct {
    double lambda = 1.0, smax = 5.0, h = 1e-4;
  } ca;
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("catenoid", "Translating catenoid profile through (lambda, 0)");
    common_options(c, "catenoid");
    c.app->add_option("--lambda", ca.lambda, "neck radius")->default_str(text(ca.lambda));
    c.app->add_option("--smax", ca.smax, "arc length in each direction")->default_str(text(ca.smax));
    c.app->add_option("--h", ca.h, "integration step")->default_str(text(ca.h));
    c.run = [&ca](const fs::path& dir) {
      const ProfileCurve c = [&] {
        try {
          return catenoid_profile(ca.lambda, ca.smax, ca.h);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      write_profile_csv(dir / "profile.csv", c);
      write_line_plot_svg(dir / "profile.svg", "catenoid profile, lambda = " + format_real(ca.lambda), "r", "z",
                          {{"profile", c.r, c.z, false}});
      const double defect = max_abs(catenoid_curvature_defect(c, 10));
      write_key_values(dir / "meta.txt", {{"lambda", format_real(c.lambda)},
                                          {"necksize", format_real(necksize_rotational(c))},
                                          {"max_curvature_defect", format_real(defect)}});
      std::cout << "necksize " << format_real(necksize_rotational(c)) << ", max |H + e3.nu| " << format_real(defect)
                << '\n';
      return 0;
    };
  }

  // morserado
  struct {
    std::string field;
    double catenoid_lambda = 0.0;
    std::string foliation = "vplane";
    double vx = 1.0, vy = 0.0, angle = 0.0, bowl_rmax = 8.0;
    int cluster_radius = 3;
  } mr;
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("morserado", "Critical points of a foliation function restricted to a surface");
    common_options(c, "morserado");
    c.app->add_option("--field", mr.field, "graph to analyse (field file)");
    c.app->add_option("--catenoid-lambda", mr.catenoid_lambda, "analyse the translating catenoid instead");
    c.app->add_option("--foliation", mr.foliation, "vplane, grimreaper or bowl")
        ->check(CLI::IsMember({"vplane", "grimreaper", "bowl"}))
        ->default_str(text(mr.foliation));
    c.app->add_option("--vx", mr.vx, "vertical plane direction, x")->default_str(text(mr.vx));
    c.app->add_option("--vy", mr.vy, "vertical plane direction, y")->default_str(text(mr.vy));
    c.app->add_option("--angle", mr.angle, "rotation of the grim reaper family")->default_str(text(mr.angle));
    c.app->add_option("--bowl-rmax", mr.bowl_rmax, "radius covered by the bowl family")->default_str(text(mr.bowl_rmax));
    c.app->add_option("--cluster-radius", mr.cluster_radius, "cells merged into one critical point")
        ->default_str(text(mr.cluster_radius));
    c.run = [&mr](const fs::path& dir) {
      if (mr.field.empty() == !(mr.catenoid_lambda > 0)) {
        throw UsageError("give exactly one of --field or --catenoid-lambda");
      }
      std::optional<FoliationFunction> fol;
      try {
        if (mr.foliation == "vplane") fol = FoliationFunction::vertical_plane(mr.vx, mr.vy);
        else if (mr.foliation == "grimreaper") fol = FoliationFunction::closed_form(ClosedFormFamily::grim_reaper(), mr.angle);
        else fol = FoliationFunction::bowl(std::make_shared<RadialProfile>(bowl_profile(mr.bowl_rmax, 1e-3)));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      CriticalPointReport rep;
      std::optional<RhsReport> rhs;
      if (!mr.field.empty()) {
        HeightField f = [&] {
          try {
            return read_field(mr.field);
          } catch (const std::exception& e) {
            throw UsageError(e.what());
          }
        }();
        rep = count_critical_points_graph(f, *fol, GraphCountOptions{mr.cluster_radius, 1e-8});
        const ShapeMeta& shape = f.domain().shape();
        std::vector<BoundaryCurve> curves;
        int chi = 1;
        if (const auto* r = std::get_if<RectangleShape>(&shape)) {
          curves.push_back({BoundaryCurve::Kind::Rectangle, 0, 0, r->L, r->b});
        } else {
          const auto& a = std::get<AnnulusShape>(shape);
          curves.push_back({BoundaryCurve::Kind::Rectangle, 0, 0, a.a, a.b});
          curves.push_back({BoundaryCurve::Kind::Rectangle, 0, 0, a.A, a.B});
          chi = 0;
        }
        try {
          rhs = morse_rado_rhs(curves, *fol, chi);
        } catch (const std::invalid_argument& e) {
          std::cout << "no boundary count: " << e.what() << '\n';
        }
        std::vector<Marker> marks;
        for (const CriticalPoint& p : rep.points) marks.push_back({p.x, p.y, "m=" + std::to_string(p.multiplicity)});
        write_contour_svg(dir / "critical_points.svg", f, 16, "critical points of " + fol->describe(), marks);
      } else {
        try {
          rep = count_critical_points_rotational(catenoid_profile(mr.catenoid_lambda, 5.0, 1e-4), *fol);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      write_report_csv(dir / "critical_points.csv", rep, rhs);
      std::cout << "count " << rep.total;
      if (rhs) std::cout << ", boundary side " << rhs->rhs << (rhs->imported ? " (imported constant)" : "");
      std::cout << '\n';
      for (const std::string& n : rep.notes) std::cout << "note: " << n << '\n';
      if (!rep.ok()) throw NumericalFailure(rep.error);
      return 0;
    };
  }

  // verify
  std::string level = "desk";
  {
    Command& c = commands.emplace_back();
    c.app = app.add_subcommand("verify", "Run the acceptance suite");
    common_options(c, "verify");
    c.app->add_option("--level", level, "quick or desk")->check(CLI::IsMember({"quick", "desk"}))->default_str(text(level));
    c.run = [&level](const fs::path& dir) {
      AcceptanceOptions opt;
      opt.level = level == "quick" ? VerifyLevel::Quick : VerifyLevel::Desk;
      opt.out_dir = dir;
      opt.on_result = [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; };
      const auto results = run_acceptance(opt);
      int failed = 0;
      for (const auto& r : results) failed += r.pass ? 0 : 1;
      std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria pass\n";
      if (failed > 0) throw NumericalFailure(std::to_string(failed) + " criteria failed");
      return 0;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (Command& c : commands) {
    if (!c.app->parsed()) continue;
    fs::path dir;
    try {
      if (!c.config.empty()) apply_config(*c.app, c.config);
      dir = output_dir(c.out);
      write_effective_config(*c.app, dir);
      return c.run(dir);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return 1;
    } catch (const NumericalFailure& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      if (!dir.empty()) mark_failed(dir, e.what());
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      if (!dir.empty()) mark_failed(dir, e.what());
      return 2;
    }
  }
  return 1;
}
