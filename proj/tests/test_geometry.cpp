#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <set>

#include "hetsim/geometry.hpp"

using namespace hetsim;
using geom::Position;

TEST_CASE("hex lattice: ring counts and spacing") {
  auto zero = geom::hex_macro_sites(500.0, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].x == 0.0);
  CHECK(zero[0].y == 0.0);

  auto one = geom::hex_macro_sites(500.0, 1);
  REQUIRE(one.size() == 7);
  for (std::size_t i = 1; i < one.size(); ++i) {
    const double d = std::hypot(one[i].x, one[i].y);
    CHECK(std::abs(d - 500.0) <= 500.0 * 1e-9);
  }

  // Minimum pairwise distance among the 6 outer sites, computed directly on
  // the emitted lattice.
  double min_pair = 1e300;
  for (std::size_t i = 1; i < one.size(); ++i) {
    for (std::size_t j = i + 1; j < one.size(); ++j) {
      min_pair = std::min(min_pair, std::hypot(one[i].x - one[j].x, one[i].y - one[j].y));
    }
  }
  CHECK(std::abs(min_pair - 500.0) <= 500.0 * 1e-9);

  CHECK(geom::hex_macro_sites(500.0, 2).size() == 19);
  CHECK(geom::hex_macro_sites(500.0, 3).size() == 37);

  CHECK_THROWS_AS(geom::hex_macro_sites(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(geom::hex_macro_sites(500.0, -1), std::invalid_argument);
}

TEST_CASE("link geometry") {
  auto vertical = geom::link_geometry({0, 0, 25}, {0, 0, 1.5});
  CHECK(vertical.distance_3d == doctest::Approx(23.5).epsilon(1e-12));
  CHECK(vertical.elevation == doctest::Approx(-90.0));
  CHECK(vertical.azimuth == 0.0);  // coincident-in-plane convention

  auto axis = geom::link_geometry({0, 0, 0}, {100, 0, 0});
  CHECK(axis.distance_3d == doctest::Approx(100.0));
  CHECK(axis.azimuth == doctest::Approx(0.0));
  CHECK(axis.elevation == doctest::Approx(0.0));

  auto diag = geom::link_geometry({0, 0, 3}, {30, 40, 1.5});
  CHECK(diag.distance_2d == doctest::Approx(50.0));
  CHECK(diag.distance_3d == doctest::Approx(std::sqrt(50.0 * 50.0 + 1.5 * 1.5)));

  auto north = geom::link_geometry({0, 0, 0}, {0, 10, 0});
  CHECK(north.azimuth == doctest::Approx(90.0));
  auto west = geom::link_geometry({0, 0, 0}, {-10, 0, 0});
  CHECK(west.azimuth == doctest::Approx(180.0));
}

TEST_CASE("point in hexagon") {
  const double isd = 500.0;
  const double r = geom::hex_circumradius(isd);
  const double a = geom::hex_apothem(isd);
  CHECK(geom::point_in_hexagon(0, 0, isd));
  CHECK(geom::point_in_hexagon(r * 0.999, 0, isd));        // near vertex
  CHECK_FALSE(geom::point_in_hexagon(r * 1.001, 0, isd));
  CHECK(geom::point_in_hexagon(0, a * 0.999, isd));        // near flat
  CHECK_FALSE(geom::point_in_hexagon(0, a * 1.001, isd));
  CHECK_FALSE(geom::point_in_hexagon(r * 0.9, a * 0.9, isd));  // outside corner cut
}

namespace {

geom::DeploymentConfig small_config(int n_ue, int n35, int n60) {
  geom::DeploymentConfig config;
  config.n_ue = n_ue;
  config.n_small_3g5 = n35;
  config.n_small_60g = n60;
  return config;
}

}  // namespace

TEST_CASE("deployment: homogeneous baseline has no small cells") {
  const auto dep = geom::generate_deployment(small_config(10, 0, 0), 7);
  CHECK(dep.small_cells.empty());
  CHECK(dep.ues.size() == 10);
  CHECK(dep.sites.size() == 7);
  CHECK(dep.evaluated_site().site_id == 0);
  int n_eval = 0;
  for (const auto& site : dep.sites) n_eval += site.evaluated ? 1 : 0;
  CHECK(n_eval == 1);
}

TEST_CASE("deployment: determinism in (config, seed)") {
  const auto config = small_config(50, 5, 5);
  const auto a = geom::generate_deployment(config, 1234);
  const auto b = geom::generate_deployment(config, 1234);
  REQUIRE(a.ues.size() == b.ues.size());
  for (std::size_t i = 0; i < a.ues.size(); ++i) {
    CHECK(a.ues[i].position.x == b.ues[i].position.x);
    CHECK(a.ues[i].position.y == b.ues[i].position.y);
  }
  for (std::size_t i = 0; i < a.small_cells.size(); ++i) {
    CHECK(a.small_cells[i].position.x == b.small_cells[i].position.x);
    CHECK(a.small_cells[i].position.y == b.small_cells[i].position.y);
  }

  const auto c = geom::generate_deployment(config, 1235);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.ues.size(); ++i) {
    any_diff |= a.ues[i].position.x != c.ues[i].position.x;
  }
  CHECK(any_diff);
}

TEST_CASE("deployment: large drop honors hexagon and minimum distances") {
  const auto config = small_config(5000, 0, 100);
  const auto dep = geom::generate_deployment(config, 99);
  REQUIRE(dep.ues.size() == 5000);
  REQUIRE(dep.small_cells.size() == 100);

  for (const auto& ue : dep.ues) {
    CHECK(geom::point_in_hexagon(ue.position.x, ue.position.y, config.isd_m));
    CHECK(ue.position.z == doctest::Approx(1.5));
    for (const auto& site : dep.sites) {
      CHECK(std::hypot(ue.position.x - site.position.x,
                       ue.position.y - site.position.y) >= 35.0);
    }
    for (const auto& cell : dep.small_cells) {
      CHECK(std::hypot(ue.position.x - cell.position.x,
                       ue.position.y - cell.position.y) >= 3.0);
    }
  }
  for (const auto& cell : dep.small_cells) {
    CHECK(geom::point_in_hexagon(cell.position.x, cell.position.y, config.isd_m));
    CHECK(cell.position.z == doctest::Approx(3.0));  // 60 GHz height
    for (const auto& site : dep.sites) {
      CHECK(std::hypot(cell.position.x - site.position.x,
                       cell.position.y - site.position.y) >= 75.0);
    }
  }
}

TEST_CASE("deployment: band heights") {
  const auto dep = geom::generate_deployment(small_config(1, 3, 4), 5);
  REQUIRE(dep.small_cells.size() == 7);
  for (const auto& cell : dep.small_cells) {
    if (cell.band == Band::small_3g5) {
      CHECK(cell.position.z == doctest::Approx(10.0));
    } else {
      CHECK(cell.position.z == doctest::Approx(3.0));
    }
  }
}

TEST_CASE("deployment: infeasible min-distance config fails loudly") {
  auto config = small_config(5, 0, 1);
  config.min_small_to_macro_2d_m = 5000.0;  // larger than the hexagon
  config.max_placement_attempts = 200;
  CHECK_THROWS_AS(geom::generate_deployment(config, 1), std::runtime_error);
}

TEST_CASE("uniformity: six congruent sub-triangles carry 1/6 each") {
  auto config = small_config(100000, 0, 0);
  const auto dep = geom::generate_deployment(config, 2024);
  std::array<int, 6> counts{};
  for (const auto& ue : dep.ues) {
    double angle = std::atan2(ue.position.y, ue.position.x) * 180.0 / M_PI;
    if (angle < 0) angle += 360.0;
    ++counts[static_cast<int>(angle / 60.0) % 6];
  }
  for (int count : counts) {
    CHECK(std::abs(count / 100000.0 - 1.0 / 6.0) < 0.03 / 6.0);
  }
}
