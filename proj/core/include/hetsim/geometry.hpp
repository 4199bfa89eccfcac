#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hetsim/band.hpp"
#include "hetsim/rng.hpp"

namespace hetsim::geom {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters
  double z = 0.0;  // meters above ground
};

struct MacroSite {
  int site_id = 0;
  Position position;                      // z = BS antenna height
  std::array<double, 3> sector_azimuths;  // degrees, 120 apart
  bool evaluated = false;                 // exactly one site is evaluated
};

struct SmallCell {
  int cell_id = 0;
  Position position;
  Band band = Band::small_60g;
};

struct UE {
  int ue_id = 0;
  Position position;   // z = 1.5 m
  double demand = 0.0; // bps, filled by the traffic model
};

struct Deployment {
  std::vector<MacroSite> sites;
  std::vector<SmallCell> small_cells;
  std::vector<UE> ues;
  std::uint64_t seed = 0;

  const MacroSite& evaluated_site() const;
};

struct LinkGeometry {
  double distance_3d = 0.0;  // meters
  double distance_2d = 0.0;  // meters
  double azimuth = 0.0;      // degrees in [0, 360), 0 = +x, counterclockwise
  double elevation = 0.0;    // degrees in [-90, 90], positive above horizon
};

// Drop-generation knobs. Minimum distances are 2D, following the usual 3GPP
// drop constraints.
struct DeploymentConfig {
  double isd_m = 500.0;
  int rings = 1;
  int n_ue = 500;
  int n_small_3g5 = 0;
  int n_small_60g = 0;
  double macro_height_m = 25.0;
  double small_height_3g5_m = 10.0;
  double small_height_60g_m = 3.0;
  double ue_height_m = 1.5;
  double min_ue_to_macro_2d_m = 35.0;
  double min_ue_to_small_2d_m = 3.0;
  double min_small_to_macro_2d_m = 75.0;
  int max_placement_attempts = 10000;  // per dropped entity
};

// Hexagon conventions (flat-topped, sector boresights at 30/150/270 deg):
// the evaluated cell is the hexagon of circumradius isd/sqrt(3) centered on
// the evaluated site; neighbor sites sit across the flats at distance isd.
double hex_circumradius(double isd_m);
double hex_apothem(double isd_m);
bool point_in_hexagon(double x, double y, double isd_m);

// Hexagonal macro lattice: 1 + 3*rings*(rings+1) site positions, center first.
std::vector<Position> hex_macro_sites(double isd_m, int rings);

// One Monte Carlo drop: central-cell-uniform small cells and UEs, rejection
// sampled against the minimum-distance constraints. Pure in (config, seed).
// Throws std::runtime_error if a placement cannot satisfy the constraints
// within config.max_placement_attempts, std::invalid_argument on bad config.
Deployment generate_deployment(const DeploymentConfig& config, std::uint64_t seed);

// 3D geometry of b as seen from a. Coincident 2D points get azimuth 0.
LinkGeometry link_geometry(const Position& a, const Position& b);

double distance_2d(const Position& a, const Position& b);
double distance_3d(const Position& a, const Position& b);

}  // namespace hetsim::geom
