#include <cmath>
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "translab/closed_forms.hpp"
#include "translab/dirichlet.hpp"
#include "translab/field_io.hpp"
#include "translab/ode_solitons.hpp"
#include "translab/operators.hpp"

using namespace translab;

namespace {

const Solution& quarter_L4() {
  static const Solution s = solve(make_rectangle_domain(4, kPi / 4, 257, 65));
  return s;
}

bool positive_inside(const HeightField& f) {
  const GridDomain& g = f.domain();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.tag(k) == NodeTag::Interior && !(f[k] > 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rectangle L=4, b=pi/4: center height approaches -log cos b from below") {
  const Solution& s = quarter_L4();
  REQUIRE(s.converged);
  CHECK(s.t_reached == 1.0);
  CHECK(s.residual_norm <= SolverConfig{}.newton_tol);
  const double C = 0.5 * std::log(2.0);
  CHECK(s.center_height < C);
  CHECK(C - s.center_height < 2e-2);
  CHECK(positive_inside(s.field));
  const NodeIndex m = argmax_node(s);
  CHECK(m == *s.field.domain().origin_node());
  CHECK(symmetrize_check(s).max() <= 1e-10);
}

TEST_CASE("the t = 0 step needs no Newton iterations") {
  const Solution s = solve(make_rectangle_domain(1, 1, 17, 17));
  REQUIRE(!s.steps.empty());
  CHECK(s.steps.front().t == 0.0);
  CHECK(s.steps.front().iterations == 0);
  CHECK(s.steps.front().converged);
  CHECK(s.steps.back().t == 1.0);
}

TEST_CASE("monotonicity in L and nested ordering") {
  const Solution s8 = solve(make_rectangle_domain(8, kPi / 4, 513, 65));
  REQUIRE(s8.converged);
  CHECK(s8.center_height > quarter_L4().center_height);
  const OrderingReport r = compare_fields(quarter_L4(), s8);
  CHECK(r.violations.empty());
  CHECK(r.min_difference > 0);
  CHECK(r.shared_nodes == quarter_L4().field.domain().count(NodeTag::Interior));
}

TEST_CASE("compare_fields: identical fields and rejected grids") {
  const OrderingReport same = compare_fields(quarter_L4(), quarter_L4());
  CHECK(same.min_difference == 0.0);
  CHECK(same.violations.empty());
  const HeightField other = HeightField::zero(make_rectangle_domain(4, kPi / 4, 129, 65));
  CHECK_THROWS_AS(compare_fields(quarter_L4().field, other), std::invalid_argument);
  // hi must contain lo.
  const HeightField small = HeightField::zero(make_rectangle_domain(2, kPi / 4, 129, 65));
  CHECK_THROWS_AS(compare_fields(quarter_L4().field, small), std::invalid_argument);
  CHECK_NOTHROW(compare_fields(small, quarter_L4().field));
}

TEST_CASE("shifted grim reaper is a barrier from above") {
  for (double b : {0.5, kPi / 4, 1.2}) {
    const Solution s = solve(make_rectangle_domain(2, b, 129, 33));
    REQUIRE(s.converged);
    const GridDomain& g = s.field.domain();
    const auto fam = ClosedFormFamily::shifted_grim_reaper(b);
    const HeightField bar = HeightField::sample(g, [&](double x, double y) { return evaluate(fam, x, y); });
    const double tol = 10 * (g.dx() * g.dx() + g.dy() * g.dy());
    const OrderingReport r = compare_fields(s.field, bar, tol);
    CAPTURE(b);
    CHECK(r.violations.empty());
    CHECK(r.min_difference >= -tol);
  }
}

TEST_CASE("a raised bowl caps the solution") {
  const Solution s = solve(make_rectangle_domain(2, 1.2, 65, 41));
  REQUIRE(s.converged);
  const RadialProfile bowl = bowl_profile(3.0, 1e-3);
  const double lift = bowl.depth(std::hypot(2.0, 1.2));  // clears the boundary
  const GridDomain& g = s.field.domain();
  const HeightField cap =
      HeightField::sample(g, [&](double x, double y) { return bowl.height(std::hypot(x, y)) + lift; });
  CHECK(compare_fields(s.field, cap).violations.empty());
}

TEST_CASE("center height converges under refinement") {
  std::vector<double> c;
  for (int k : {1, 2, 4}) {
    const Solution s = solve(make_rectangle_domain(2, kPi / 4, 32 * k + 1, 8 * k + 1));
    REQUIRE(s.converged);
    c.push_back(s.center_height);
  }
  CHECK(std::abs(c[2] - c[1]) < 0.5 * std::abs(c[1] - c[0]));
}

TEST_CASE("argmax: origin for zero fields and for b = pi") {
  const GridDomain g = make_rectangle_domain(3, 2, 31, 21);
  CHECK(argmax_node(HeightField::zero(g)) == *g.origin_node());
  const Solution s = solve(make_rectangle_domain(4, kPi, 129, 65));
  REQUIRE(s.converged);
  CHECK(argmax_node(s) == *s.field.domain().origin_node());
  CHECK(symmetrize_check(s).max() <= 1e-10);
}

TEST_CASE("symmetrize_check on closed forms") {
  const GridDomain g = make_rectangle_domain(2, 0.9 * kPi, 41, 33);
  CHECK(symmetrize_check(HeightField::zero(g)).max() == 0.0);
  const auto fam = ClosedFormFamily::tilted_grim_reaper(kPi, TiltSign::Positive);
  const SymmetryReport r = symmetrize_check(HeightField::sample(g, [&](double x, double y) { return evaluate(fam, x, y); }));
  CHECK(r.x_asymmetry == doctest::Approx(2 * std::sqrt(3.0) * 2).epsilon(1e-12));
  CHECK(r.y_asymmetry <= 1e-13);
  CHECK_THROWS(symmetrize_check(HeightField::zero(GridDomain::from_layout(5, 5, 0, 0, 1, 1, RectangleShape{2, 2}))));
}

TEST_CASE("annulus a=b=2, A=B=2.5") {
  const Solution s = solve_annulus_family(2, 2, 2.5, 2.5, 81, 81);
  REQUIRE(s.converged);
  double top = 0;
  for (double v : s.field.values()) {
    if (std::isfinite(v)) top = std::max(top, v);
  }
  CHECK(top > 0);
  CHECK(top < 0.5);
  CHECK(ilmanen_area(s.field) <= ilmanen_area(HeightField::zero(s.field.domain())));
  CHECK(ilmanen_area(HeightField::zero(s.field.domain())) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(symmetrize_check(s).max() <= 1e-10);
  CHECK(std::isnan(s.center_height));
}

TEST_CASE("thin annulus: height shrinks with the gap") {
  // dx = 0.0025 so both gaps are whole numbers of cells.
  const Solution thin = solve_annulus_family(1, 1, 1.01, 1.01, 809, 809);
  const Solution wider = solve_annulus_family(1, 1, 1.04, 1.04, 833, 833);
  REQUIRE(thin.converged);
  REQUIRE(wider.converged);
  auto top = [](const Solution& s) {
    double m = 0;
    for (double v : s.field.values()) {
      if (std::isfinite(v)) m = std::max(m, v);
    }
    return m;
  };
  CHECK(top(thin) <= 1e-1);
  CHECK(top(thin) < top(wider));
}

TEST_CASE("failures are reported, not thrown") {
  SolverConfig cfg;
  cfg.max_newton_iters = 1;
  cfg.continuation_steps = 1;
  cfg.max_halvings = 0;
  const Solution s = solve(make_rectangle_domain(2, kPi / 4, 33, 17), cfg);
  CHECK_FALSE(s.converged);
  CHECK(s.t_reached < 1.0);
  CHECK_FALSE(s.message.empty());

  SolverConfig low;
  low.divergence_height = 0.1;
  const Solution b = solve(make_rectangle_domain(4, kPi / 4, 65, 17), low);
  CHECK_FALSE(b.converged);
  CHECK(b.height_blowup);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.newton_tol = 1e-14;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.damping = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.continuation_steps = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.linear_tol = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("metadata sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "translab_dirichlet_test";
  std::filesystem::create_directories(dir);
  write_solution_metadata(dir / "meta.txt", quarter_L4());
  const KeyValues kv = read_key_values(dir / "meta.txt");
  std::vector<std::string> keys;
  for (const auto& [k, v] : kv) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"converged", "residual_norm", "t_reached", "iterations", "center_height",
                                         "height_blowup"});
  CHECK(kv[0].second == "true");
  CHECK(std::stod(kv[4].second) == quarter_L4().center_height);
  std::filesystem::remove_all(dir);
}
