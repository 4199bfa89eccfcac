#include "hetsim/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hetsim::geom {

namespace {
constexpr double kDegPerRad = 180.0 / M_PI;
constexpr double kSqrt3 = 1.7320508075688772;
}  // namespace

const MacroSite& Deployment::evaluated_site() const {
  for (const auto& site : sites) {
    if (site.evaluated) return site;
  }
  throw std::logic_error("deployment has no evaluated site");
}

double hex_circumradius(double isd_m) { return isd_m / kSqrt3; }

double hex_apothem(double isd_m) { return isd_m / 2.0; }

bool point_in_hexagon(double x, double y, double isd_m) {
  // Flat-topped hexagon: edge normals at 30/90/150 deg, apothem isd/2.
  const double a = hex_apothem(isd_m);
  const double proj30 = std::abs(0.5 * kSqrt3 * x + 0.5 * y);
  const double proj150 = std::abs(-0.5 * kSqrt3 * x + 0.5 * y);
  return proj30 <= a && std::abs(y) <= a && proj150 <= a;
}

std::vector<Position> hex_macro_sites(double isd_m, int rings) {
  if (isd_m <= 0.0) throw std::invalid_argument("isd must be > 0");
  if (rings < 0) throw std::invalid_argument("rings must be >= 0");

  // Lattice basis: neighbors across the hexagon flats, at 30 and 90 deg.
  const double ax = isd_m * 0.5 * kSqrt3;
  const double ay = isd_m * 0.5;
  const double bx = 0.0;
  const double by = isd_m;

  std::vector<Position> sites;
  sites.push_back({0.0, 0.0, 0.0});
  for (int ring = 1; ring <= rings; ++ring) {
    for (int i = -ring; i <= ring; ++i) {
      for (int j = -ring; j <= ring; ++j) {
        const int k = std::max({std::abs(i), std::abs(j), std::abs(i + j)});
        if (k != ring) continue;
        sites.push_back({i * ax + j * bx, i * ay + j * by, 0.0});
      }
    }
  }
  return sites;
}

double distance_2d(const Position& a, const Position& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double distance_3d(const Position& a, const Position& b) {
  return std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
}

LinkGeometry link_geometry(const Position& a, const Position& b) {
  LinkGeometry g;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  g.distance_2d = std::hypot(dx, dy);
  g.distance_3d = std::hypot(dx, dy, dz);
  if (g.distance_2d > 0.0) {
    double az = std::atan2(dy, dx) * kDegPerRad;
    if (az < 0.0) az += 360.0;
    if (az >= 360.0) az = 0.0;
    g.azimuth = az;
  } else {
    g.azimuth = 0.0;  // coincident-in-plane convention
  }
  if (g.distance_3d > 0.0) {
    g.elevation = std::asin(dz / g.distance_3d) * kDegPerRad;
  }
  return g;
}

namespace {

Position sample_in_hexagon(double isd_m, rng::Xoshiro256pp& gen) {
  const double r = hex_circumradius(isd_m);
  const double a = hex_apothem(isd_m);
  for (;;) {
    const double x = gen.uniform(-r, r);
    const double y = gen.uniform(-a, a);
    if (point_in_hexagon(x, y, isd_m)) return {x, y, 0.0};
  }
}

bool respects_min_distance(const Position& p, const std::vector<Position>& others,
                           double min_2d) {
  for (const auto& o : others) {
    if (std::hypot(p.x - o.x, p.y - o.y) < min_2d) return false;
  }
  return true;
}

}  // namespace

Deployment generate_deployment(const DeploymentConfig& config, std::uint64_t seed) {
  if (config.isd_m <= 0.0) throw std::invalid_argument("isd must be > 0");
  if (config.rings < 0) throw std::invalid_argument("rings must be >= 0");
  if (config.n_ue < 0 || config.n_small_3g5 < 0 || config.n_small_60g < 0) {
    throw std::invalid_argument("entity counts must be >= 0");
  }

  Deployment dep;
  dep.seed = seed;

  const auto site_positions = hex_macro_sites(config.isd_m, config.rings);
  dep.sites.reserve(site_positions.size());
  for (std::size_t i = 0; i < site_positions.size(); ++i) {
    MacroSite site;
    site.site_id = static_cast<int>(i);
    site.position = site_positions[i];
    site.position.z = config.macro_height_m;
    site.sector_azimuths = {30.0, 150.0, 270.0};
    site.evaluated = (i == 0);  // center site is the evaluated cell
    dep.sites.push_back(site);
  }

  rng::Xoshiro256pp gen(
      rng::mix_key({seed, static_cast<std::uint64_t>(rng::Stream::deployment)}));

  std::vector<Position> site_xy;
  site_xy.reserve(dep.sites.size());
  for (const auto& s : dep.sites) site_xy.push_back(s.position);

  auto place = [&](double min_to_macro, const std::vector<Position>& avoid,
                   double min_to_avoid, const char* what) {
    for (int attempt = 0; attempt < config.max_placement_attempts; ++attempt) {
      Position p = sample_in_hexagon(config.isd_m, gen);
      if (!respects_min_distance(p, site_xy, min_to_macro)) continue;
      if (!avoid.empty() && !respects_min_distance(p, avoid, min_to_avoid)) continue;
      return p;
    }
    throw std::runtime_error(std::string("rejection sampling failed placing ") + what +
                             " (min-distance config infeasible)");
  };

  // Small cells first: UEs must also keep clear of them.
  std::vector<Position> small_xy;
  const int n_small = config.n_small_3g5 + config.n_small_60g;
  dep.small_cells.reserve(n_small);
  for (int i = 0; i < n_small; ++i) {
    const Band band = i < config.n_small_3g5 ? Band::small_3g5 : Band::small_60g;
    SmallCell cell;
    cell.cell_id = i;
    cell.band = band;
    cell.position = place(config.min_small_to_macro_2d_m, {}, 0.0, "small cell");
    cell.position.z =
        band == Band::small_3g5 ? config.small_height_3g5_m : config.small_height_60g_m;
    small_xy.push_back(cell.position);
    dep.small_cells.push_back(cell);
  }

  dep.ues.reserve(config.n_ue);
  for (int i = 0; i < config.n_ue; ++i) {
    UE ue;
    ue.ue_id = i;
    ue.position = place(config.min_ue_to_macro_2d_m, small_xy,
                        config.min_ue_to_small_2d_m, "UE");
    ue.position.z = config.ue_height_m;
    dep.ues.push_back(ue);
  }

  return dep;
}

}  // namespace hetsim::geom
