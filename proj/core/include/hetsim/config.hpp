#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetsim/band.hpp"
#include "hetsim/channel.hpp"
#include "hetsim/geometry.hpp"

namespace hetsim {

enum class Method { max_sinr, combinatorial };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct TrafficConfig {
  double shape_k = 0.2892;
  double bias_bps = 4000.0;
  double target_mean_bps = 64.0e3;
};

struct AssociationConfig {
  std::vector<Method> methods = {Method::max_sinr, Method::combinatorial};
  int max_iters = 10;  // 1 = single alpha pass
};

struct ChannelConfig {
  double shadowing_sigma_macro_db = 8.0;
  double shadowing_sigma_3g5_db = 10.0;
  double shadowing_sigma_60g_db = 0.0;
  int interferer_beam_draws = 8;
  double se_cap_bps_hz = 0.0;  // <= 0: uncapped Shannon
  double extra_60g_db_per_km = 0.0;
};

struct SweepGridConfig {
  std::vector<int> n_smallcells = {0, 25, 50, 100};
  std::vector<Band> bands = {Band::small_3g5, Band::small_60g};
  std::vector<double> traffic_means_bps = {64.0e3, 64.0e6};
};

struct OutputConfig {
  std::string dir = "out";
  bool svg = false;
};

struct SimConfig {
  int version = 1;
  std::uint64_t base_seed = 1;
  int n_drops = 20;
  int workers = 0;  // 0 = hardware concurrency
  geom::DeploymentConfig deployment;
  channel::BandParams band_macro = channel::default_band_params(Band::macro_2g);
  channel::BandParams band_3g5 = channel::default_band_params(Band::small_3g5);
  channel::BandParams band_60g = channel::default_band_params(Band::small_60g);
  TrafficConfig traffic;
  AssociationConfig association;
  ChannelConfig channel;
  SweepGridConfig sweep;
  OutputConfig output;
  std::optional<geom::Deployment> deployment_override;

  const channel::BandParams& band(Band b) const;
};

// Presets. "desk" runs 500 UEs / 20 drops; "paper" keeps the full evaluation
// scale (5000 UEs per macro cell).
SimConfig desk_preset();
SimConfig paper_preset();
SimConfig preset_by_name(const std::string& name);

// Strict JSON load: schema version pinned, unknown keys are errors. Throws
// ConfigError with a path-qualified message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SimConfig load_config(const std::string& json_text);
SimConfig load_config_file(const std::string& path);
std::string config_to_json(const SimConfig& config);

// Basic semantic validation (counts, referenced bands, ranges); throws
// ConfigError on violation. load_config always calls this.
void validate_config(const SimConfig& config);

// Deployment fixture io; same schema as the config's deployment_override.
std::string deployment_to_json(const geom::Deployment& deployment);
geom::Deployment deployment_from_json(const std::string& json_text);

}  // namespace hetsim
