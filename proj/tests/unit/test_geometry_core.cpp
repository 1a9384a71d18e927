#include <cmath>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "translab/closed_forms.hpp"
#include "translab/field_io.hpp"
#include "translab/grid.hpp"
#include "translab/operators.hpp"

using namespace translab;

namespace {

bool mask_symmetric(const GridDomain& g) {
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != g.tag(g.nx() - 1 - i, j) || g.tag(i, j) != g.tag(i, g.ny() - 1 - j)) return false;
    }
  }
  return true;
}

bool interior_neighbours_ok(const GridDomain& g) {
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.tag(i, j) != NodeTag::Interior) continue;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= g.nx() || b >= g.ny() || g.tag(a, b) == NodeTag::Exterior) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rectangle domain: 5x5 node counts") {
  const GridDomain g = make_rectangle_domain(1, 1, 5, 5);
  CHECK(g.size() == 25);
  CHECK(g.count(NodeTag::Interior) == 9);
  CHECK(g.count(NodeTag::Boundary) == 16);
  CHECK(g.count(NodeTag::Exterior) == 0);
  REQUIRE(g.origin_node());
  CHECK(g.origin_node()->i == 2);
  CHECK(g.origin_node()->j == 2);
}

TEST_CASE("rectangle domain: spacing from the definition") {
  const GridDomain g = make_rectangle_domain(4, kPi / 4, 257, 65);
  CHECK(g.dx() == 0.03125);
  CHECK(g.dy() == doctest::Approx(kPi / 2 / 64).epsilon(1e-15));
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(256) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(mask_symmetric(g));
  CHECK(g.symmetric_about_origin());
}

TEST_CASE("rectangle domain: rejected inputs") {
  CHECK_THROWS_AS(make_rectangle_domain(1, 1, 4, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_rectangle_domain(1, 1, 5, 6), std::invalid_argument);
  CHECK_THROWS_AS(make_rectangle_domain(0, 1, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_rectangle_domain(1, -1, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_rectangle_domain(1, 1, 3, 3), std::invalid_argument);
}

TEST_CASE("annular domain: brute-force interior count and symmetry") {
  const GridDomain g = make_annular_domain(1, 1, 2, 2, 9, 9);
  CHECK(g.count(NodeTag::Interior) == 24);
  // Both traces are boundary: 32 nodes on the outer square, 16 on the inner.
  CHECK(g.count(NodeTag::Boundary) == 32 + 16);
  CHECK(g.count(NodeTag::Exterior) == 9);
  CHECK(mask_symmetric(g));
  CHECK(interior_neighbours_ok(g));
  CHECK(g.tag(4, 4) == NodeTag::Exterior);
  CHECK(g.tag(2, 4) == NodeTag::Boundary);  // x = -1 on the inner edge
  CHECK(g.tag(1, 4) == NodeTag::Interior);
}

TEST_CASE("annular domain: rejected inputs name a compatible grid") {
  CHECK_THROWS_AS(make_annular_domain(2, 1, 1, 2, 9, 9), std::invalid_argument);
  CHECK_THROWS_AS(make_annular_domain(1, 2, 2, 1, 9, 9), std::invalid_argument);
  try {
    (void)make_annular_domain(1, 1, 2, 2, 11, 9);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("nx") != std::string::npos);
  }
}

TEST_CASE("annular domain: thin gap on a fine grid") {
  // Gap 0.01 needs dx dividing 1 and 1.01.
  const GridDomain g = make_annular_domain(1, 1, 1.01, 1.01, 809, 809);
  CHECK(g.count(NodeTag::Interior) > 0);
  CHECK(interior_neighbours_ok(g));
}

TEST_CASE("height field: exterior sentinel and boundary data") {
  const GridDomain g = make_annular_domain(1, 1, 2, 2, 9, 9);
  const HeightField f = HeightField::constant(g, 2.5);
  CHECK(std::isnan(f(4, 4)));
  CHECK(f(0, 0) == 2.5);
  CHECK(f.boundary_values().size() == g.count(NodeTag::Boundary));
  const HeightField s = f.shifted(-0.5);
  CHECK(s(0, 0) == 2.0);
  CHECK(std::isnan(s(4, 4)));
}

TEST_CASE("field file round trip is bit exact") {
  const GridDomain g = make_annular_domain(1, 1, 2, 2, 9, 9);
  const HeightField f = HeightField::sample(g, [](double x, double y) { return std::sin(x) * std::exp(y) / 3.0; });
  std::stringstream ss;
  write_field(ss, f);
  const std::string text = ss.str();
  CHECK(text.rfind("# translator-field v1\n", 0) == 0);
  CHECK(text.find("shape Annulus 1 1 2 2") != std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
  const HeightField back = read_field(ss);
  REQUIRE(back.domain().nx() == 9);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (std::isnan(f[k])) {
      CHECK(std::isnan(back[k]));
    } else {
      CHECK(back[k] == f[k]);
    }
  }
  CHECK(back.domain().shape().index() == 1);
  std::stringstream bad("# translator-field v2\n");
  CHECK_THROWS(read_field(bad));
}

TEST_CASE("residual: flat field solves the minimal surface equation") {
  const GridDomain g = make_rectangle_domain(1, 1, 17, 17);
  CHECK(max_abs(translator_residual(HeightField::zero(g), 0.0)) == 0.0);
  CHECK(max_abs(divergence_residual(HeightField::zero(g), 0.0)) == 0.0);
  // t = 1 is not solved by the flat plane: the residual is the source term.
  CHECK(max_abs(translator_residual(HeightField::zero(g), 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("residual: grim reaper is second order in dy") {
  std::vector<double> h, e;
  for (int n : {33, 65, 129, 257}) {
    const GridDomain g = make_rectangle_domain(1, 1.2, n, n);
    const HeightField f = HeightField::sample(g, [](double, double y) { return std::log(std::cos(y)); });
    const NodeValues r = translator_residual(f, 1.0);
    h.push_back(g.dy());
    e.push_back(test::max_abs_in_box(r, g, 1.0, 0.9));
  }
  CHECK(e.back() < 1e-3);
  const double s = test::loglog_slope(h, e);
  CHECK(s >= 1.7);
  CHECK(s <= 2.3);
}

TEST_CASE("residual: tilted grim reaper b = pi is second order") {
  const auto fam = ClosedFormFamily::tilted_grim_reaper(kPi, TiltSign::Positive);
  std::vector<double> h, e;
  for (int n : {33, 65, 129, 257}) {
    const GridDomain g = make_rectangle_domain(2, 2.0, n, n);
    const HeightField f = HeightField::sample(g, [&](double x, double y) { return evaluate(fam, x, y); });
    h.push_back(g.dx());
    e.push_back(test::max_abs_in_box(translator_residual(f, 1.0), g, 1.5, 1.5));
  }
  const double s = test::loglog_slope(h, e);
  CHECK(s >= 1.7);
  CHECK(s <= 2.3);
}

TEST_CASE("strong form and divergence form agree to second order") {
  // Smooth, non-solution test field; the two residuals relate by W^3.
  auto u = [](double x, double y) { return 0.3 * std::sin(1.3 * x + 0.4) * std::cos(0.9 * y) + 0.2 * x * y; };
  auto ux = [](double x, double y) { return 0.39 * std::cos(1.3 * x + 0.4) * std::cos(0.9 * y) + 0.2 * y; };
  auto uy = [](double x, double y) { return -0.27 * std::sin(1.3 * x + 0.4) * std::sin(0.9 * y) + 0.2 * x; };
  for (double t : {0.0, 0.5, 1.0}) {
    std::vector<double> h, e;
    for (int n : {17, 33, 65, 129}) {
      const GridDomain g = make_rectangle_domain(1, 1, n, n);
      const HeightField f = HeightField::sample(g, u);
      const NodeValues strong = translator_residual(f, t);
      const NodeValues fv = divergence_residual(f, t);
      double m = 0;
      for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
          const std::size_t k = g.index(i, j);
          if (g.tag(k) != NodeTag::Interior) continue;
          const double p = ux(g.x(i), g.y(j)), q = uy(g.x(i), g.y(j));
          const double W = std::sqrt(1 + p * p + q * q);
          m = std::max(m, std::abs(strong[k] / (W * W * W) - fv[k]));
        }
      }
      h.push_back(g.dx());
      e.push_back(m);
    }
    CAPTURE(t);
    const double s = test::loglog_slope(h, e);
    CHECK(s >= 1.7);
    CHECK(e.back() < 1e-3);
  }
}

TEST_CASE("ilmanen area: flat, shifted and annular") {
  const GridDomain r = make_rectangle_domain(1, 1, 33, 33);
  CHECK(ilmanen_area(HeightField::zero(r)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(ilmanen_area(HeightField::constant(r, 0.7)) == doctest::Approx(4.0 * std::exp(-0.7)).epsilon(1e-12));
  const GridDomain a = make_annular_domain(1, 1, 2, 2, 33, 33);
  CHECK(ilmanen_area(HeightField::zero(a)) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("ilmanen area scales by exp(-c) under vertical shifts") {
  const GridDomain g = make_rectangle_domain(1.5, 1, 31, 21);
  const HeightField f = HeightField::sample(g, [](double x, double y) { return 0.2 * x * x - 0.1 * y + 0.05 * x * y; });
  const double a = ilmanen_area(f);
  for (double c : {-1.0, 0.3, 2.0}) {
    CHECK(ilmanen_area(f.shifted(c)) == doctest::Approx(std::exp(-c) * a).epsilon(1e-13));
  }
}

TEST_CASE("central gradient is NaN off the interior") {
  const GridDomain g = make_rectangle_domain(1, 1, 9, 9);
  const Gradient d = central_gradient(HeightField::sample(g, [](double x, double y) { return 2 * x - y; }));
  CHECK(std::isnan(d.ux[g.index(0, 0)]));
  CHECK(d.ux[g.index(4, 4)] == doctest::Approx(2.0));
  CHECK(d.uy[g.index(4, 4)] == doctest::Approx(-1.0));
}
