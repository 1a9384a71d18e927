#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "translab/closed_forms.hpp"
#include "translab/dirichlet.hpp"
#include "translab/limit_lab.hpp"
#include "translab/morse_rado.hpp"
#include "translab/ode_solitons.hpp"

using namespace translab;

namespace {

FoliationFunction gr_fol(double angle = 0.0) {
  return FoliationFunction::closed_form(ClosedFormFamily::grim_reaper(), angle);
}

// The grim reaper plus a perturbation p, so Du - Dh = Dp.
HeightField perturbed_gr(const GridDomain& g, double (*p)(double, double)) {
  const auto fam = ClosedFormFamily::grim_reaper();
  return HeightField::sample(g, [&](double x, double y) { return evaluate(fam, x, y) + p(x, y); });
}

}  // namespace

TEST_CASE("vertical planes never touch a graph") {
  const Solution s = solve(make_rectangle_domain(2, 1, 33, 17));
  for (const auto& fol : {FoliationFunction::vertical_plane(1, 0), FoliationFunction::vertical_plane(1, 1)}) {
    const CriticalPointReport rep = count_critical_points_graph(s.field, fol);
    CHECK(rep.ok());
    CHECK(rep.total == 0);
    CHECK(rep.points.empty());
  }
  CHECK_THROWS_AS(FoliationFunction::vertical_plane(0, 0), std::invalid_argument);
  CHECK(FoliationFunction::vertical_plane(3, 4).direction().x == doctest::Approx(0.6));
}

TEST_CASE("isolated tangencies of perturbed grim reapers") {
  const GridDomain g = make_rectangle_domain(2, 1.2, 81, 49);
  SUBCASE("minimum") {
    const CriticalPointReport rep = count_critical_points_graph(perturbed_gr(g, [](double x, double y) {
      return 0.1 * ((x - 0.3) * (x - 0.3) + y * y);
    }), gr_fol());
    REQUIRE(rep.ok());
    CHECK(rep.total == 1);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].contains(0.3, 0.0));
  }
  SUBCASE("saddle") {
    const CriticalPointReport rep = count_critical_points_graph(perturbed_gr(g, [](double x, double y) {
      return 0.1 * (x * x - y * y);
    }), gr_fol());
    CHECK(rep.total == 1);
  }
  SUBCASE("two critical points") {
    const CriticalPointReport rep = count_critical_points_graph(perturbed_gr(g, [](double x, double y) {
      return 0.1 * (x * x * x / 3 - x + y * y / 2);
    }), gr_fol());
    CHECK(rep.total == 2);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.points[0].contains(-1.0, 0.0) != rep.points[1].contains(-1.0, 0.0));
    CHECK_FALSE(rep.overlapping_clusters);
  }
}

TEST_CASE("count is unchanged under grid refinement") {
  auto p = [](double x, double y) { return 0.1 * (x * x * x / 3 - x + y * y / 2); };
  for (int n : {41, 81, 161}) {
    const GridDomain g = make_rectangle_domain(2, 1.2, n, (n + 1) / 2 + 4);
    CHECK(count_critical_points_graph(perturbed_gr(g, p), gr_fol()).total == 2);
  }
}

TEST_CASE("leaf coincidence is an error, not a count") {
  const auto shifted = ClosedFormFamily::shifted_grim_reaper(kPi / 4);
  const HeightField f =
      HeightField::sample(make_rectangle_domain(2, kPi / 4, 65, 33), [&](double x, double y) { return evaluate(shifted, x, y); });
  // Central differences of log cos y carry an O(dy^2) error, so the
  // tolerance is set above it.
  GraphCountOptions opt;
  opt.coincidence_tol = 1e-2;
  const CriticalPointReport rep = count_critical_points_graph(f, gr_fol(), opt);
  CHECK_FALSE(rep.ok());
  CHECK(rep.error == "leaf coincidence");
}

TEST_CASE("rotated grim reaper foliation") {
  const FoliationFunction f0 = gr_fol(0.0);
  const FoliationFunction f1 = gr_fol(kPi / 2);
  // Turning by pi/2 swaps the roles of x and y.
  CHECK(f1.h(0.3, 0.7) == doctest::Approx(f0.h(0.7, -0.3)));
  CHECK(f0.defined(5.0, 1.5));
  CHECK_FALSE(f0.defined(0.0, 1.6));
  CHECK(f0(0.0, 0.0, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("Delta-wing limit touches the grim reaper at the apex") {
  const LimitSweep s = run_sweep(kPi, {2, 4, 8, 16}, Window{2, 0.3}, SweepGrid{0.125, 65});
  const DeltaWingResult w = extract_delta_wing(s);
  const CriticalPointReport rep = count_critical_points_graph(w.limit_field, gr_fol());
  REQUIRE(rep.ok());
  CHECK(rep.total >= 1);
  CHECK(std::any_of(rep.points.begin(), rep.points.end(), [](const CriticalPoint& p) { return p.contains(0, 0); }));
  // Lower semicontinuity: the limit has no more tangencies than the late
  // sweep members.
  int least = 1 << 30;
  for (std::size_t k = s.renormalized.size() - 3; k < s.renormalized.size(); ++k) {
    least = std::min(least, count_critical_points_graph(s.renormalized[k], gr_fol()).total);
  }
  CHECK(rep.total <= least);
}

TEST_CASE("rotational counts") {
  SUBCASE("W(1) against planes normal to e1") {
    const CriticalPointReport rep =
        count_critical_points_rotational(catenoid_profile(1.0, 3.0, 1e-3), FoliationFunction::vertical_plane(1, 0));
    CHECK(rep.total == 2);
    REQUIRE(rep.points.size() == 2);
    for (const CriticalPoint& p : rep.points) {
      CHECK(std::abs(p.x) == doctest::Approx(1.0));
      CHECK(p.y == doctest::Approx(0.0));
      CHECK(p.z == doctest::Approx(0.0));
    }
  }
  SUBCASE("W(0.25) against planes normal to e2") {
    const CriticalPointReport rep =
        count_critical_points_rotational(catenoid_profile(0.25, 3.0, 1e-3), FoliationFunction::vertical_plane(0, 1));
    CHECK(rep.total == 2);
    for (const CriticalPoint& p : rep.points) {
      CHECK(p.x == doctest::Approx(0.0));
      CHECK(std::abs(p.y) == doctest::Approx(0.25));
    }
  }
  SUBCASE("bowl") {
    const CriticalPointReport rep =
        count_critical_points_rotational(bowl_profile(3.0, 1e-3), FoliationFunction::vertical_plane(1, 0));
    CHECK(rep.total == 0);
  }
}

TEST_CASE("boundary count for vertical planes") {
  const FoliationFunction fv = FoliationFunction::vertical_plane(1, 0);
  const BoundaryCurve inner{BoundaryCurve::Kind::Ellipse, 0, 0, 2, 1};
  const BoundaryCurve outer{BoundaryCurve::Kind::Ellipse, 0, 0, 4, 3};
  const RhsReport two = morse_rado_rhs({inner, outer}, fv, 0);
  CHECK(two.q_count == 2);
  CHECK(two.a_count == 0);
  CHECK(two.rhs == 2);
  CHECK_FALSE(two.imported);
  REQUIRE(two.minima.size() == 2);
  CHECK(two.minima[0].x == doctest::Approx(-2.0));
  CHECK(two.minima[0].y == doctest::Approx(0.0));

  CHECK(morse_rado_rhs({inner}, fv, 1).rhs == 0);
  const RhsReport flagged = morse_rado_rhs({inner, outer}, fv, 0, {true, false});
  CHECK(flagged.a_count == 1);
  CHECK(flagged.rhs == 1);

  const BoundaryCurve rect{BoundaryCurve::Kind::Rectangle, 0, 0, 2, 1};
  CHECK_THROWS_AS(morse_rado_rhs({rect}, fv, 1), std::invalid_argument);
  CHECK_THROWS_AS(morse_rado_rhs({rect}, FoliationFunction::vertical_plane(0, 1), 1), std::invalid_argument);
  const RhsReport tilted = morse_rado_rhs({rect}, FoliationFunction::vertical_plane(std::cos(0.3), std::sin(0.3)), 1);
  CHECK(tilted.rhs == 0);
  REQUIRE(tilted.minima.size() == 1);
  CHECK(tilted.minima[0].x == doctest::Approx(-2.0));
  CHECK(tilted.minima[0].y == doctest::Approx(-1.0));
}

TEST_CASE("boundary count for graph families is imported") {
  const BoundaryCurve a{BoundaryCurve::Kind::Rectangle, 0, 0, 2, 2};
  const BoundaryCurve b{BoundaryCurve::Kind::Rectangle, 0, 0, 2.5, 2.5};
  const RhsReport r = morse_rado_rhs({a, b}, gr_fol(), 0);
  CHECK(r.imported);
  CHECK(r.rhs == 8);
  CHECK_THROWS_AS(morse_rado_rhs({a}, gr_fol(), 1), std::invalid_argument);
}

TEST_CASE("annulus counts stay below the boundary count") {
  const Solution ann = solve_annulus_family(2, 2, 2.5, 2.5, 41, 41);
  REQUIRE(ann.converged);
  const RhsReport rhs = morse_rado_rhs({{BoundaryCurve::Kind::Rectangle, 0, 0, 2, 2},
                                        {BoundaryCurve::Kind::Rectangle, 0, 0, 2.5, 2.5}},
                                       gr_fol(), 0);
  for (double a : {0.0, kPi / 8, kPi / 4}) {
    const CriticalPointReport rep = count_critical_points_graph(ann.field, gr_fol(a));
    CHECK(rep.ok());
    CHECK(rep.total <= rhs.rhs);
  }
  const auto bowl = std::make_shared<RadialProfile>(bowl_profile(4.0, 1e-3));
  const CriticalPointReport rep = count_critical_points_graph(ann.field, FoliationFunction::bowl(bowl));
  CHECK(rep.ok());
  CHECK(rep.total <= rhs.rhs);
}

TEST_CASE("report CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "translab_mr_test";
  std::filesystem::create_directories(dir);
  const CriticalPointReport rep =
      count_critical_points_rotational(catenoid_profile(1.0, 3.0, 1e-3), FoliationFunction::vertical_plane(1, 0));
  RhsReport rhs;
  rhs.rhs = 2;
  write_report_csv(dir / "r.csv", rep, rhs);
  std::ifstream in(dir / "r.csv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "kind,x,y,z,multiplicity");
  CHECK(lines[1].rfind("point,", 0) == 0);
  CHECK(lines[3].rfind("total,", 0) == 0);
  CHECK(lines[4].rfind("rhs,", 0) == 0);
  std::filesystem::remove_all(dir);
}
