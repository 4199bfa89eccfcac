#include "hetsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hetsim {

using nlohmann::json;

const char* to_string(Method method) {
  return method == Method::max_sinr ? "max_sinr" : "combinatorial";
}

Method method_from_string(const std::string& name) {
  if (name == "max_sinr") return Method::max_sinr;
  if (name == "combinatorial") return Method::combinatorial;
  throw ConfigError("unknown association method: " + name);
}

const channel::BandParams& SimConfig::band(Band b) const {
  switch (b) {
    case Band::macro_2g: return band_macro;
    case Band::small_3g5: return band_3g5;
    case Band::small_60g: return band_60g;
  }
  throw std::logic_error("bad band");
}

SimConfig desk_preset() {
  SimConfig config;
  config.deployment.n_ue = 500;
  config.n_drops = 20;
  return config;
}

SimConfig paper_preset() {
  SimConfig config;
  config.deployment.n_ue = 5000;
  config.n_drops = 20;
  return config;
}

SimConfig preset_by_name(const std::string& name) {
  if (name == "desk") return desk_preset();
  if (name == "paper") return paper_preset();
  throw ConfigError("unknown preset: " + name + " (expected desk or paper)");
}

namespace {

const char* pattern_name(channel::AntennaPattern p) {
  switch (p) {
    case channel::AntennaPattern::sector_3gpp: return "sector_3gpp";
    case channel::AntennaPattern::omni: return "omni";
    case channel::AntennaPattern::steered_beam: return "steered_beam";
  }
  return "?";
}

channel::AntennaPattern pattern_from_name(const std::string& name) {
  if (name == "sector_3gpp") return channel::AntennaPattern::sector_3gpp;
  if (name == "omni") return channel::AntennaPattern::omni;
  if (name == "steered_beam") return channel::AntennaPattern::steered_beam;
  throw ConfigError("unknown antenna pattern: " + name);
}

// Strict object access: every present key must be consumed.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& item : j.items()) remaining_.push_back(item.key());
  }

  ~StrictObject() = default;

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* take(const std::string& key) {
    remaining_.erase(std::remove(remaining_.begin(), remaining_.end(), key),
                     remaining_.end());
    if (!j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (const json* v = take(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(path_ + "." + key + ": " + e.what());
      }
    }
  }

  void finish() const {
    if (!remaining_.empty()) {
      throw ConfigError(path_ + ": unknown key \"" + remaining_.front() + "\"");
    }
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> remaining_;
};

void parse_band(const json& j, const std::string& path, channel::BandParams& band) {
  StrictObject obj(j, path);
  obj.get("center_frequency_hz", band.center_frequency_hz);
  obj.get("bandwidth_hz", band.bandwidth_hz);
  obj.get("tx_power_dbm", band.tx_power_dbm);
  obj.get("max_antenna_gain_dbi", band.max_antenna_gain_dbi);
  obj.get("bs_height_m", band.bs_height_m);
  obj.get("n_bs_antennas", band.n_bs_antennas);
  obj.get("n_ue_antennas", band.n_ue_antennas);
  obj.get("noise_density_dbm_hz", band.noise_density_dbm_hz);
  obj.get("noise_figure_db", band.noise_figure_db);
  obj.get("ue_antenna_gain_dbi", band.ue_antenna_gain_dbi);
  if (const json* v = obj.take("pattern")) {
    band.pattern = pattern_from_name(v->get<std::string>());
  }
  obj.finish();
}

json band_to_json(const channel::BandParams& band) {
  return json{{"center_frequency_hz", band.center_frequency_hz},
              {"bandwidth_hz", band.bandwidth_hz},
              {"tx_power_dbm", band.tx_power_dbm},
              {"max_antenna_gain_dbi", band.max_antenna_gain_dbi},
              {"bs_height_m", band.bs_height_m},
              {"n_bs_antennas", band.n_bs_antennas},
              {"n_ue_antennas", band.n_ue_antennas},
              {"pattern", pattern_name(band.pattern)},
              {"noise_density_dbm_hz", band.noise_density_dbm_hz},
              {"noise_figure_db", band.noise_figure_db},
              {"ue_antenna_gain_dbi", band.ue_antenna_gain_dbi}};
}

geom::Deployment parse_deployment_override(const json& j, const std::string& path) {
  StrictObject obj(j, path);
  geom::Deployment dep;
  if (const json* v = obj.take("seed")) dep.seed = v->get<std::uint64_t>();
  if (const json* v = obj.take("sites")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      StrictObject s((*v)[i], path + ".sites[" + std::to_string(i) + "]");
      geom::MacroSite site;
      s.get("site_id", site.site_id);
      s.get("x", site.position.x);
      s.get("y", site.position.y);
      s.get("z", site.position.z);
      if (const json* az = s.take("sector_azimuths")) {
        if (az->size() != 3) throw ConfigError(s.path() + ": need 3 sector azimuths");
        for (int k = 0; k < 3; ++k) site.sector_azimuths[k] = (*az)[k].get<double>();
      } else {
        site.sector_azimuths = {30.0, 150.0, 270.0};
      }
      s.get("evaluated", site.evaluated);
      s.finish();
      dep.sites.push_back(site);
    }
  }
  if (const json* v = obj.take("small_cells")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      StrictObject s((*v)[i], path + ".small_cells[" + std::to_string(i) + "]");
      geom::SmallCell cell;
      s.get("cell_id", cell.cell_id);
      s.get("x", cell.position.x);
      s.get("y", cell.position.y);
      s.get("z", cell.position.z);
      if (const json* b = s.take("band")) cell.band = band_from_string(b->get<std::string>());
      s.finish();
      dep.small_cells.push_back(cell);
    }
  }
  if (const json* v = obj.take("ues")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      StrictObject s((*v)[i], path + ".ues[" + std::to_string(i) + "]");
      geom::UE ue;
      s.get("ue_id", ue.ue_id);
      s.get("x", ue.position.x);
      s.get("y", ue.position.y);
      s.get("z", ue.position.z);
      s.get("demand", ue.demand);
      s.finish();
      dep.ues.push_back(ue);
    }
  }
  obj.finish();
  return dep;
}

json deployment_override_to_json(const geom::Deployment& dep) {
  json j;
  j["seed"] = dep.seed;
  j["sites"] = json::array();
  for (const auto& site : dep.sites) {
    j["sites"].push_back({{"site_id", site.site_id},
                          {"x", site.position.x},
                          {"y", site.position.y},
                          {"z", site.position.z},
                          {"sector_azimuths", site.sector_azimuths},
                          {"evaluated", site.evaluated}});
  }
  j["small_cells"] = json::array();
  for (const auto& cell : dep.small_cells) {
    j["small_cells"].push_back({{"cell_id", cell.cell_id},
                                {"x", cell.position.x},
                                {"y", cell.position.y},
                                {"z", cell.position.z},
                                {"band", to_string(cell.band)}});
  }
  j["ues"] = json::array();
  for (const auto& ue : dep.ues) {
    j["ues"].push_back({{"ue_id", ue.ue_id},
                        {"x", ue.position.x},
                        {"y", ue.position.y},
                        {"z", ue.position.z},
                        {"demand", ue.demand}});
  }
  return j;
}

}  // namespace

SimConfig load_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  SimConfig config;
  StrictObject root(j, "config");
  root.get("version", config.version);
  if (config.version != 1) {
    throw ConfigError("unsupported config version " + std::to_string(config.version));
  }
  root.get("base_seed", config.base_seed);
  root.get("n_drops", config.n_drops);
  root.get("workers", config.workers);

  if (const json* v = root.take("deployment")) {
    StrictObject d(*v, "config.deployment");
    d.get("isd_m", config.deployment.isd_m);
    d.get("rings", config.deployment.rings);
    d.get("n_ue", config.deployment.n_ue);
    d.get("n_small_3g5", config.deployment.n_small_3g5);
    d.get("n_small_60g", config.deployment.n_small_60g);
    d.get("min_ue_to_macro_2d_m", config.deployment.min_ue_to_macro_2d_m);
    d.get("min_ue_to_small_2d_m", config.deployment.min_ue_to_small_2d_m);
    d.get("min_small_to_macro_2d_m", config.deployment.min_small_to_macro_2d_m);
    d.get("max_placement_attempts", config.deployment.max_placement_attempts);
    d.finish();
  }

  if (const json* v = root.take("bands")) {
    StrictObject b(*v, "config.bands");
    if (const json* m = b.take("macro_2g")) parse_band(*m, "config.bands.macro_2g", config.band_macro);
    if (const json* m = b.take("small_3g5")) parse_band(*m, "config.bands.small_3g5", config.band_3g5);
    if (const json* m = b.take("small_60g")) parse_band(*m, "config.bands.small_60g", config.band_60g);
    b.finish();
  }

  if (const json* v = root.take("traffic")) {
    StrictObject t(*v, "config.traffic");
    t.get("shape_k", config.traffic.shape_k);
    t.get("bias_bps", config.traffic.bias_bps);
    t.get("target_mean_bps", config.traffic.target_mean_bps);
    t.finish();
  }

  if (const json* v = root.take("association")) {
    StrictObject a(*v, "config.association");
    if (const json* m = a.take("methods")) {
      config.association.methods.clear();
      for (const auto& name : *m) {
        config.association.methods.push_back(method_from_string(name.get<std::string>()));
      }
    }
    a.get("max_iters", config.association.max_iters);
    a.finish();
  }

  if (const json* v = root.take("channel")) {
    StrictObject c(*v, "config.channel");
    c.get("shadowing_sigma_macro_db", config.channel.shadowing_sigma_macro_db);
    c.get("shadowing_sigma_3g5_db", config.channel.shadowing_sigma_3g5_db);
    c.get("shadowing_sigma_60g_db", config.channel.shadowing_sigma_60g_db);
    c.get("interferer_beam_draws", config.channel.interferer_beam_draws);
    c.get("se_cap_bps_hz", config.channel.se_cap_bps_hz);
    c.get("extra_60g_db_per_km", config.channel.extra_60g_db_per_km);
    c.finish();
  }

  if (const json* v = root.take("sweep")) {
    StrictObject s(*v, "config.sweep");
    if (const json* m = s.take("n_smallcells")) {
      config.sweep.n_smallcells = m->get<std::vector<int>>();
    }
    if (const json* m = s.take("bands")) {
      config.sweep.bands.clear();
      for (const auto& name : *m) {
        config.sweep.bands.push_back(band_from_string(name.get<std::string>()));
      }
    }
    if (const json* m = s.take("traffic_means_bps")) {
      config.sweep.traffic_means_bps = m->get<std::vector<double>>();
    }
    s.finish();
  }

  if (const json* v = root.take("output")) {
    StrictObject o(*v, "config.output");
    o.get("dir", config.output.dir);
    o.get("svg", config.output.svg);
    o.finish();
  }

  if (const json* v = root.take("deployment_override")) {
    if (!v->is_null()) {
      config.deployment_override =
          parse_deployment_override(*v, "config.deployment_override");
    }
  }

  root.finish();
  validate_config(config);
  return config;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

std::string config_to_json(const SimConfig& config) {
  json j;
  j["version"] = config.version;
  j["base_seed"] = config.base_seed;
  j["n_drops"] = config.n_drops;
  j["workers"] = config.workers;
  j["deployment"] = {{"isd_m", config.deployment.isd_m},
                     {"rings", config.deployment.rings},
                     {"n_ue", config.deployment.n_ue},
                     {"n_small_3g5", config.deployment.n_small_3g5},
                     {"n_small_60g", config.deployment.n_small_60g},
                     {"min_ue_to_macro_2d_m", config.deployment.min_ue_to_macro_2d_m},
                     {"min_ue_to_small_2d_m", config.deployment.min_ue_to_small_2d_m},
                     {"min_small_to_macro_2d_m", config.deployment.min_small_to_macro_2d_m},
                     {"max_placement_attempts", config.deployment.max_placement_attempts}};
  j["bands"] = {{"macro_2g", band_to_json(config.band_macro)},
                {"small_3g5", band_to_json(config.band_3g5)},
                {"small_60g", band_to_json(config.band_60g)}};
  j["traffic"] = {{"shape_k", config.traffic.shape_k},
                  {"bias_bps", config.traffic.bias_bps},
                  {"target_mean_bps", config.traffic.target_mean_bps}};
  json methods = json::array();
  for (Method m : config.association.methods) methods.push_back(to_string(m));
  j["association"] = {{"methods", methods}, {"max_iters", config.association.max_iters}};
  j["channel"] = {{"shadowing_sigma_macro_db", config.channel.shadowing_sigma_macro_db},
                  {"shadowing_sigma_3g5_db", config.channel.shadowing_sigma_3g5_db},
                  {"shadowing_sigma_60g_db", config.channel.shadowing_sigma_60g_db},
                  {"interferer_beam_draws", config.channel.interferer_beam_draws},
                  {"se_cap_bps_hz", config.channel.se_cap_bps_hz},
                  {"extra_60g_db_per_km", config.channel.extra_60g_db_per_km}};
  json bands = json::array();
  for (Band b : config.sweep.bands) bands.push_back(to_string(b));
  j["sweep"] = {{"n_smallcells", config.sweep.n_smallcells},
                {"bands", bands},
                {"traffic_means_bps", config.sweep.traffic_means_bps}};
  j["output"] = {{"dir", config.output.dir}, {"svg", config.output.svg}};
  if (config.deployment_override.has_value()) {
    j["deployment_override"] = deployment_override_to_json(*config.deployment_override);
  }
  return j.dump(2);
}

void validate_config(const SimConfig& config) {
  const auto& d = config.deployment;
  if (config.n_drops < 1) throw ConfigError("n_drops must be >= 1");
  if (config.workers < 0) throw ConfigError("workers must be >= 0");
  if (d.isd_m <= 0.0) throw ConfigError("deployment.isd_m must be > 0");
  if (d.rings < 0) throw ConfigError("deployment.rings must be >= 0");
  if (d.n_ue < 0 || d.n_small_3g5 < 0 || d.n_small_60g < 0) {
    throw ConfigError("deployment counts must be >= 0");
  }
  for (const auto* band : {&config.band_macro, &config.band_3g5, &config.band_60g}) {
    if (band->bandwidth_hz <= 0.0) throw ConfigError("band bandwidth must be > 0");
    if (band->n_bs_antennas < 1 || band->n_ue_antennas < 1) {
      throw ConfigError("band antenna counts must be >= 1");
    }
  }
  if (config.traffic.shape_k <= 0.0) throw ConfigError("traffic.shape_k must be > 0");
  if (config.traffic.bias_bps < 0.0) throw ConfigError("traffic.bias_bps must be >= 0");
  if (config.traffic.target_mean_bps <= config.traffic.bias_bps) {
    throw ConfigError("traffic.target_mean_bps must exceed traffic.bias_bps");
  }
  if (config.association.methods.empty()) {
    throw ConfigError("association.methods must not be empty");
  }
  if (config.association.max_iters < 1) {
    throw ConfigError("association.max_iters must be >= 1");
  }
  if (config.channel.interferer_beam_draws < 1) {
    throw ConfigError("channel.interferer_beam_draws must be >= 1");
  }
  if (config.sweep.n_smallcells.empty() || config.sweep.bands.empty() ||
      config.sweep.traffic_means_bps.empty()) {
    throw ConfigError("sweep grid axes must not be empty");
  }
  for (int n : config.sweep.n_smallcells) {
    if (n < 0) throw ConfigError("sweep.n_smallcells entries must be >= 0");
  }
  for (Band b : config.sweep.bands) {
    if (b == Band::macro_2g) throw ConfigError("sweep.bands must be small-cell bands");
  }
  for (double mean : config.sweep.traffic_means_bps) {
    if (mean <= config.traffic.bias_bps) {
      throw ConfigError("sweep traffic means must exceed traffic.bias_bps");
    }
  }
}

std::string deployment_to_json(const geom::Deployment& deployment) {
  return deployment_override_to_json(deployment).dump(2);
}

geom::Deployment deployment_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("deployment parse error: ") + e.what());
  }
  return parse_deployment_override(j, "deployment");
}

}  // namespace hetsim
