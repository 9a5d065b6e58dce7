#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "motionfeas/body_model.h"

namespace motionfeas {

struct ContactParams {
  double height_max = 0.02;  // m
  double vel_max = 0.05;     // m/s
  double rho_min = 0.6;
  double rho_max = 1.75;
  double rho_eps = 1e-3;         // m/s, added to the root speed
  double root_speed_min = 0.01;  // m/s, below this the ratio is not tested
  double balance_clip = 0.5;     // m
  double balance_no_contact = 1.0;
  double slip_norm = 0.0025;  // m per foot-frame
  double gpen_norm = 0.05;    // m
  int ballistic_min_frames = 3;
  double ballistic_rms_max = 0.05;  // m
};

struct SpenParams {
  double baseline = 2.0;  // percent
  double severe = 20.0;   // percent
};

struct DynamicsParams {
  double vertical_grf_factor = 3.0;    // x body weight
  double horizontal_grf_factor = 0.5;  // x body weight
  double met_norm = 10000.0;
};

struct RewardWeights {
  double kinematic = 1.0;
  double contact = 1.0;
  double dynamic = 1.0;

  bool is_equal() const { return kinematic == contact && contact == dynamic; }
};

struct ScoringParams {
  ContactParams contact;
  SpenParams spen;
  DynamicsParams dynamics;
  RewardWeights weights;
};

using ConfigValue = std::variant<double, std::string, std::vector<double>>;

// Flat key/value configuration. Keys are dotted paths such as
// "contact.height_max" or "joint_limits.left_knee.x"; a "[section]" header
// prefixes the keys that follow it.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  void set(std::string key, ConfigValue value);
  // Parses "key=value" with the same value grammar as the file format.
  void set_from_assignment(std::string_view assignment);
  void merge(const Config& other);

  const std::map<std::string, ConfigValue>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Renders as a canonical file that parse() reads back unchanged.
  std::string to_string() const;

 private:
  std::map<std::string, ConfigValue> entries_;
};

// Applies every entry to the body model and scoring parameters. Unknown
// keys, unknown joints and malformed values raise ConfigError.
void apply_config(const Config& config, BodyModel& body, ScoringParams& params);

// Every tunable threshold in effect, keyed the same way apply_config reads
// them.
Config effective_config(const BodyModel& body, const ScoringParams& params);

}  // namespace motionfeas
