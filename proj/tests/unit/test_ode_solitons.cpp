#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "doctest.h"
#include "test_support.hpp"
#include "translab/closed_forms.hpp"
#include "translab/grid.hpp"
#include "translab/ode_solitons.hpp"
#include "translab/operators.hpp"

using namespace translab;

TEST_CASE("bowl: initial data and series behaviour") {
  const RadialProfile p = bowl_profile(1.0, 1e-4);
  CHECK(p.r.front() == 0.0);
  CHECK(p.u.front() == 0.0);
  CHECK(p.du.front() == 0.0);
  CHECK(p.depth(1e-3) / 1e-6 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(p.height(0.5) == -p.depth(0.5));
}

TEST_CASE("bowl: ODE residual at r = 1") {
  const double h = 1e-4;
  const RadialProfile p = bowl_profile(2.0, h);
  const std::size_t k = static_cast<std::size_t>(std::lround(1.0 / h));
  REQUIRE(p.r[k] == doctest::Approx(1.0).epsilon(1e-12));
  const double u2 = (p.du[k + 1] - p.du[k - 1]) / (2 * h);
  const double res = u2 - (1 + p.du[k] * p.du[k]) * (1 - p.du[k] / p.r[k]);
  CHECK(std::abs(res) < 1e-8);
}

TEST_CASE("bowl: the sampled surface of revolution is a translator") {
  const auto p = std::make_shared<RadialProfile>(bowl_profile(2.0, 1e-4));
  std::vector<double> h, e;
  for (int n : {33, 65, 129, 257}) {
    const GridDomain g = make_rectangle_domain(1, 1, n, n);
    const HeightField f = HeightField::sample(g, [&](double x, double y) { return p->height(std::hypot(x, y)); });
    h.push_back(g.dx());
    e.push_back(max_abs(translator_residual(f, 1.0)));
  }
  CHECK(e.back() < 1e-4);
  const double s = test::loglog_slope(h, e);
  CHECK(s >= 1.7);
  CHECK(s <= 2.3);
}

TEST_CASE("bowl: entire graph, increasing, integrates to r = 50") {
  const RadialProfile p = bowl_profile(50.0, 0.02);
  CHECK(p.r.back() == doctest::Approx(50.0));
  bool increasing = true;
  for (std::size_t k = 1; k < p.r.size(); ++k) increasing = increasing && p.du[k] > 0 && std::isfinite(p.u[k]);
  CHECK(increasing);
  // Far out the bowl grows like r^2/2 to leading order.
  CHECK(p.u.back() / (50.0 * 50.0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("bowl: step size rule") {
  CHECK_THROWS_AS(bowl_profile(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bowl_profile(50.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(bowl_profile(-1.0, 0.01), std::invalid_argument);
}

TEST_CASE("bowl: two step sizes agree at fourth order") {
  std::vector<double> h, e;
  for (double step : {0.1, 0.05, 0.025, 0.0125}) {
    h.push_back(step);
    e.push_back(std::abs(bowl_profile(2.0, step).u.back() - bowl_profile(2.0, step / 2).u.back()));
  }
  const double s = test::loglog_slope(h, e);
  CHECK(s >= 3.5);
  CHECK(s <= 4.5);
}

TEST_CASE("catenoid: shooting data and neck") {
  for (double lambda : {1.0, 0.25}) {
    const ProfileCurve c = catenoid_profile(lambda, 3.0, 1e-3);
    const std::size_t n = c.neck_index();
    CHECK(c.s[n] == 0.0);
    CHECK(c.r[n] == lambda);
    CHECK(c.z[n] == 0.0);
    CHECK(c.theta[n] == kHalfPi);
    CHECK(necksize_rotational(c) == lambda);
    // r > lambda away from s = 0.
    const auto it = std::min_element(c.r.begin(), c.r.end());
    CHECK(static_cast<std::size_t>(it - c.r.begin()) == n);
    bool above = true;
    for (std::size_t k = 0; k < c.s.size(); ++k) above = above && (k == n || c.r[k] > lambda);
    CHECK(above);
  }
}

TEST_CASE("catenoid: curvature oracle at lambda = 1") {
  const ProfileCurve c = catenoid_profile(1.0, 5.0, 1e-4);
  CHECK(max_abs(catenoid_curvature_defect(c, 10)) < 1e-6);
}

TEST_CASE("catenoid: the half-curves are not mirror images") {
  // Expanding the system at the neck gives r(s) - r(-s) = s^3 / (3 lambda)
  // + O(s^5): the e3 term breaks the s -> -s symmetry, so only r(s) >= lambda
  // survives, not r(s) = r(-s).
  for (double lambda : {1.0, 0.5}) {
    const double h = 1e-4;
    const ProfileCurve c = catenoid_profile(lambda, 0.2, h);
    const std::size_t n = c.neck_index();
    for (double s : {0.05, 0.1}) {
      const std::size_t k = static_cast<std::size_t>(std::lround(s / h));
      const double diff = c.r[n + k] - c.r[n - k];
      CHECK(diff == doctest::Approx(s * s * s / (3 * lambda)).epsilon(0.05));
    }
  }
}

TEST_CASE("catenoid: integrator order by Richardson") {
  std::vector<double> h, e;
  for (double step : {0.1, 0.05, 0.025, 0.0125}) {
    h.push_back(step);
    e.push_back(std::abs(catenoid_profile(1.0, 2.0, step).z.back() - catenoid_profile(1.0, 2.0, step / 2).z.back()));
  }
  const double s = test::loglog_slope(h, e);
  CHECK(s >= 3.5);
  CHECK(s <= 4.5);
}

TEST_CASE("catenoid: wings are graphs that open downward") {
  const ProfileCurve c = catenoid_profile(0.5, 4.0, 1e-3);
  for (Wing w : {Wing::Upper, Wing::Lower}) {
    const HermiteTable t = wing_graph(c, w);
    CHECK(t.x_min() == doctest::Approx(0.5));
    CHECK(t.x_max() > 2.0);
    CHECK(t(2.0) < t(1.0));
  }
  CHECK(wing_graph(c, Wing::Upper)(2.0) > wing_graph(c, Wing::Lower)(2.0));
}

TEST_CASE("catenoid: small neck approaches the bowl") {
  const RadialProfile bowl = bowl_profile(4.0, 1e-4);
  const ProfileCurve c = catenoid_profile(1e-2, 5.0, 1e-4);
  for (Wing w : {Wing::Upper, Wing::Lower}) {
    const HermiteTable t = wing_graph(c, w);
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k <= 400; ++k) {
      const double r = 1.0 + 2.0 * k / 400;
      const double d = t(r) - bowl.height(r);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(0.5 * (hi - lo) < 5e-2);
  }
}

TEST_CASE("necksize of the bowl is zero") { CHECK(necksize_rotational(bowl_profile(1.0, 1e-3)) == 0.0); }

TEST_CASE("catenoid: rejects a bad neck") { CHECK_THROWS(catenoid_profile(0.0, 1.0, 1e-3)); }

TEST_CASE("profile CSV columns") {
  const auto dir = std::filesystem::temp_directory_path() / "translab_ode_test";
  std::filesystem::create_directories(dir);
  write_profile_csv(dir / "p.csv", catenoid_profile(1.0, 0.01, 1e-3));
  std::ifstream in(dir / "p.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "s,r,z,theta");
  write_bowl_csv(dir / "b.csv", bowl_profile(0.1, 1e-3));
  std::ifstream inb(dir / "b.csv");
  std::getline(inb, header);
  CHECK(header.rfind("r,", 0) == 0);
  std::filesystem::remove_all(dir);
}
