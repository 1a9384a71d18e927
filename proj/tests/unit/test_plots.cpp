#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "translab/plots.hpp"

using namespace translab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("contours of a linear field are straight") {
  const GridDomain g = make_rectangle_domain(1, 1, 11, 11);
  const HeightField f = HeightField::sample(g, [](double x, double y) { return x + 0.5 * y; });
  const auto segs = contour_segments(f, 0.1);
  REQUIRE_FALSE(segs.empty());
  for (const Segment& s : segs) {
    CHECK(s.x0 + 0.5 * s.y0 == doctest::Approx(0.1));
    CHECK(s.x1 + 0.5 * s.y1 == doctest::Approx(0.1));
  }
  CHECK(contour_segments(f, 10.0).empty());
}

TEST_CASE("contour levels lie strictly inside the range") {
  const GridDomain g = make_rectangle_domain(1, 1, 5, 5);
  const HeightField f = HeightField::sample(g, [](double x, double) { return x; });
  const auto lv = contour_levels(f, 4);
  REQUIRE(lv.size() == 4);
  CHECK(lv.front() > -1.0);
  CHECK(lv.back() < 1.0);
  for (std::size_t k = 1; k < lv.size(); ++k) CHECK(lv[k] - lv[k - 1] == doctest::Approx(lv[1] - lv[0]));
  CHECK(contour_levels(HeightField::zero(g), 4).empty());
}

TEST_CASE("exterior cells are skipped") {
  const GridDomain g = make_annular_domain(0.5, 0.5, 1, 1, 21, 21);
  const HeightField f = HeightField::sample(g, [](double x, double) { return x; });
  for (const Segment& s : contour_segments(f, 0.0)) {
    CHECK(std::abs(s.y0) >= 0.5 - 1e-12);
    CHECK(std::abs(s.y1) >= 0.5 - 1e-12);
  }
}

TEST_CASE("SVG output is written and deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "translab_plot_test";
  std::filesystem::create_directories(dir);
  const GridDomain g = make_rectangle_domain(1, 1, 17, 17);
  const HeightField f = HeightField::sample(g, [](double x, double y) { return std::log(std::cos(y)) + 0.1 * x; });
  write_contour_svg(dir / "a.svg", f, 8, "field", {{0, 0, "apex"}});
  write_contour_svg(dir / "b.svg", f, 8, "field", {{0, 0, "apex"}});
  const std::string a = slurp(dir / "a.svg");
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("apex") != std::string::npos);
  CHECK(a == slurp(dir / "b.svg"));

  write_line_plot_svg(dir / "l.svg", "t", "x", "y", {{"s", {0, 1, 2}, {1, 0, 1}, false}, {"d", {0, 2}, {0, 0}, true}});
  const std::string l = slurp(dir / "l.svg");
  CHECK(l.find("<path d=") != std::string::npos);
  CHECK(l.find("stroke-dasharray") != std::string::npos);
  std::filesystem::remove_all(dir);
}
