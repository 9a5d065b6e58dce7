#include "motionfeas/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace motionfeas {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

ConfigValue parse_value(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text.empty()) throw ConfigError("config key '" + std::string(key) + "' has no value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      throw ConfigError("config key '" + std::string(key) + "': unterminated string");
    }
    return std::string(text.substr(1, text.size() - 2));
  }
  if (text.front() == '[') {
    if (text.back() != ']') {
      throw ConfigError("config key '" + std::string(key) + "': unterminated array");
    }
    std::vector<double> values;
    std::string_view body = trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      values.push_back(parse_number(body.substr(0, comma), key));
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return values;
  }
  return parse_number(text, key);
}

std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

double as_number(const std::string& key, const ConfigValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  throw ConfigError("config key '" + key + "' must be a number");
}

double as_positive(const std::string& key, const ConfigValue& value) {
  const double d = as_number(key, value);
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ConfigError("config key '" + key + "' must be positive and finite");
  }
  return d;
}

double as_non_negative(const std::string& key, const ConfigValue& value) {
  const double d = as_number(key, value);
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw ConfigError("config key '" + key + "' must be non-negative and finite");
  }
  return d;
}

AxisRange as_range(const std::string& key, const ConfigValue& value) {
  const auto* v = std::get_if<std::vector<double>>(&value);
  if (v == nullptr || v->size() != 2) {
    throw ConfigError("config key '" + key + "' must be a [min, max] pair");
  }
  AxisRange r{(*v)[0], (*v)[1]};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw ConfigError("config key '" + key + "' must satisfy min <= max");
  }
  return r;
}

std::size_t joint_index(const BodyModel& body, const std::string& key, std::string_view name) {
  if (auto j = body.find_joint(name)) return *j;
  throw ConfigError("config key '" + key + "' names unknown joint '" + std::string(name) + "'");
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config config;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string stripped = strip_comment(raw);
    std::string_view line = trim(stripped);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (!section.empty()) key = section + "." + key;
    config.entries_[key] = parse_value(line.substr(eq + 1), key);
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(std::string key, ConfigValue value) {
  entries_[std::move(key)] = std::move(value);
}

void Config::set_from_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  std::string key(trim(assignment.substr(0, eq)));
  entries_[key] = parse_value(assignment.substr(eq + 1), key);
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

std::string Config::to_string() const {
  std::ostringstream out;
  for (const auto& [key, value] : entries_) {
    out << key << " = ";
    if (const auto* d = std::get_if<double>(&value)) {
      out << format_number(*d);
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out << '"' << *s << '"';
    } else {
      const auto& v = std::get<std::vector<double>>(value);
      out << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << format_number(v[i]);
      }
      out << ']';
    }
    out << '\n';
  }
  return out.str();
}

void apply_config(const Config& config, BodyModel& body, ScoringParams& params) {
  using Setter = std::function<void(const std::string&, const ConfigValue&)>;
  auto number = [](double& target) -> Setter {
    return [&target](const std::string& k, const ConfigValue& v) { target = as_number(k, v); };
  };
  auto positive = [](double& target) -> Setter {
    return [&target](const std::string& k, const ConfigValue& v) { target = as_positive(k, v); };
  };
  auto& c = params.contact;
  auto& d = params.dynamics;
  bool torque_dirty = false;
  auto torque = [&](double& target) -> Setter {
    return [&target, &torque_dirty](const std::string& k, const ConfigValue& v) {
      target = as_non_negative(k, v);
      torque_dirty = true;
    };
  };

  const std::map<std::string, Setter, std::less<>> scalars = {
      {"contact.height_max", number(c.height_max)},
      {"contact.vel_max", positive(c.vel_max)},
      {"float.rho_min", number(c.rho_min)},
      {"float.rho_max", number(c.rho_max)},
      {"float.eps", positive(c.rho_eps)},
      {"float.root_speed_min", number(c.root_speed_min)},
      {"balance.clip", positive(c.balance_clip)},
      {"balance.no_contact_distance", number(c.balance_no_contact)},
      {"slip_norm", positive(c.slip_norm)},
      {"gpen_norm", positive(c.gpen_norm)},
      {"ballistic.min_frames",
       [&c](const std::string& k, const ConfigValue& v) {
         const double n = as_non_negative(k, v);
         if (n != std::floor(n)) throw ConfigError("config key '" + k + "' must be an integer");
         c.ballistic_min_frames = static_cast<int>(n);
       }},
      {"ballistic.rms_max", positive(c.ballistic_rms_max)},
      {"spen.baseline", number(params.spen.baseline)},
      {"spen.severe", number(params.spen.severe)},
      {"dynamics.mass_kg", positive(body.mass_kg)},
      {"dynamics.gravity", positive(body.gravity)},
      {"dynamics.inertia",
       [&body](const std::string& k, const ConfigValue& v) {
         body.inertia.assign(body.num_joints(), as_non_negative(k, v));
       }},
      {"dynamics.torque_max.ankle", torque(body.torque_limits.ankle)},
      {"dynamics.torque_max.knee", torque(body.torque_limits.knee)},
      {"dynamics.torque_max.hip", torque(body.torque_limits.hip)},
      {"dynamics.torque_max.spine", torque(body.torque_limits.spine)},
      {"dynamics.torque_max.default", torque(body.torque_limits.fallback)},
      {"dynamics.met_norm", positive(d.met_norm)},
      {"dynamics.grf_vertical_factor", positive(d.vertical_grf_factor)},
      {"dynamics.grf_horizontal_factor", positive(d.horizontal_grf_factor)},
      {"reward.weights.kinematic",
       [&params](const std::string& k, const ConfigValue& v) {
         params.weights.kinematic = as_non_negative(k, v);
       }},
      {"reward.weights.contact",
       [&params](const std::string& k, const ConfigValue& v) {
         params.weights.contact = as_non_negative(k, v);
       }},
      {"reward.weights.dynamic",
       [&params](const std::string& k, const ConfigValue& v) {
         params.weights.dynamic = as_non_negative(k, v);
       }},
  };

  // Torque class limits must land before per-joint overrides are resolved,
  // so scalar keys are applied first.
  for (const auto& [key, value] : config.entries()) {
    if (auto it = scalars.find(key); it != scalars.end()) it->second(key, value);
  }
  if (torque_dirty) body.resolve_torque_limits();

  for (const auto& [key, value] : config.entries()) {
    if (scalars.contains(key)) continue;
    const std::string_view k = key;
    if (k.starts_with("omega_max.")) {
      body.omega_max[joint_index(body, key, k.substr(10))] = as_positive(key, value);
    } else if (k.starts_with("com_weights.")) {
      body.com_weights[joint_index(body, key, k.substr(12))] = as_positive(key, value);
    } else if (k.starts_with("dynamics.inertia.")) {
      body.inertia[joint_index(body, key, k.substr(17))] = as_non_negative(key, value);
    } else if (k.starts_with("dynamics.torque_max.")) {
      body.torque_max[joint_index(body, key, k.substr(20))] = as_non_negative(key, value);
    } else if (k.starts_with("joint_limits.")) {
      const std::string_view rest = k.substr(13);
      const auto dot = rest.rfind('.');
      if (dot == std::string_view::npos || dot + 2 != rest.size()) {
        throw ConfigError("config key '" + key + "' must be joint_limits.<joint>.<x|y|z>");
      }
      const char axis = rest.back();
      const int a = axis == 'x' ? 0 : axis == 'y' ? 1 : axis == 'z' ? 2 : -1;
      if (a < 0) throw ConfigError("config key '" + key + "': axis must be x, y or z");
      const std::size_t j = joint_index(body, key, rest.substr(0, dot));
      if (body.joint_limits.empty()) {
        body.joint_limits.resize(body.num_joints());
        for (std::size_t i = 0; i < body.num_joints(); ++i) {
          body.joint_limits[i] = default_joint_range(body.joint_types[i], body.joint_names[i]);
        }
      }
      body.joint_limits[j][a] = as_range(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (params.weights.kinematic + params.weights.contact + params.weights.dynamic <= 0.0) {
    throw ConfigError("reward weights must not all be zero");
  }
}

Config effective_config(const BodyModel& body, const ScoringParams& params) {
  Config out;
  const auto& c = params.contact;
  const auto& d = params.dynamics;
  out.set("contact.height_max", c.height_max);
  out.set("contact.vel_max", c.vel_max);
  out.set("float.rho_min", c.rho_min);
  out.set("float.rho_max", c.rho_max);
  out.set("float.eps", c.rho_eps);
  out.set("float.root_speed_min", c.root_speed_min);
  out.set("balance.clip", c.balance_clip);
  out.set("balance.no_contact_distance", c.balance_no_contact);
  out.set("slip_norm", c.slip_norm);
  out.set("gpen_norm", c.gpen_norm);
  out.set("ballistic.min_frames", static_cast<double>(c.ballistic_min_frames));
  out.set("ballistic.rms_max", c.ballistic_rms_max);
  out.set("spen.baseline", params.spen.baseline);
  out.set("spen.severe", params.spen.severe);
  out.set("dynamics.mass_kg", body.mass_kg);
  out.set("dynamics.gravity", body.gravity);
  out.set("dynamics.met_norm", d.met_norm);
  out.set("dynamics.grf_vertical_factor", d.vertical_grf_factor);
  out.set("dynamics.grf_horizontal_factor", d.horizontal_grf_factor);
  out.set("dynamics.torque_max.ankle", body.torque_limits.ankle);
  out.set("dynamics.torque_max.knee", body.torque_limits.knee);
  out.set("dynamics.torque_max.hip", body.torque_limits.hip);
  out.set("dynamics.torque_max.spine", body.torque_limits.spine);
  out.set("dynamics.torque_max.default", body.torque_limits.fallback);
  out.set("reward.weights.kinematic", params.weights.kinematic);
  out.set("reward.weights.contact", params.weights.contact);
  out.set("reward.weights.dynamic", params.weights.dynamic);

  // A uniform inertia collapses to the single scalar key.
  const bool uniform_inertia =
      !body.inertia.empty() &&
      std::all_of(body.inertia.begin(), body.inertia.end(),
                  [&](double v) { return v == body.inertia.front(); });
  for (std::size_t j = 0; j < body.num_joints(); ++j) {
    const std::string& name = body.joint_names[j];
    out.set("omega_max." + name, body.omega_max[j]);
    out.set("com_weights." + name, body.com_weights[j]);
    if (!uniform_inertia) out.set("dynamics.inertia." + name, body.inertia[j]);
    if (body.torque_max[j] !=
        body.torque_limits.for_class(torque_class(body.joint_types[j]))) {
      out.set("dynamics.torque_max." + name, body.torque_max[j]);
    }
    if (!body.joint_limits.empty()) {
      for (int a = 0; a < 3; ++a) {
        const AxisRange& r = body.joint_limits[j][a];
        out.set("joint_limits." + name + "." + kEulerAxes[a], std::vector<double>{r.lo, r.hi});
      }
    }
  }
  if (uniform_inertia) out.set("dynamics.inertia", body.inertia.front());
  return out;
}

}  // namespace motionfeas
