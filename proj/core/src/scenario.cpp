#include "edgeworth/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgeworth/csv.hpp"
#include "edgeworth/errors.hpp"

#ifndef EDGEWORTH_SCENARIO_DIR
#define EDGEWORTH_SCENARIO_DIR "scenarios"
#endif

namespace edgeworth {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

// Re-raises library errors with the field path prepended, preserving type.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const BoundaryError& e) {
    throw BoundaryError(path + ": " + e.what());
  } catch (const ProbabilityError& e) {
    throw ProbabilityError(path + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Integrator fields by name, shared by the file loader and CLI overrides.
using Setter = std::function<void(IntegratorConfig&, double)>;

const std::map<std::string, Setter, std::less<>>& integrator_fields() {
  static const std::map<std::string, Setter, std::less<>> fields = {
      {"initial_step", [](IntegratorConfig& c, double v) { c.initial_step = v; }},
      {"relative_error_target", [](IntegratorConfig& c, double v) { c.relative_error_target = v; }},
      {"stop_field_norm", [](IntegratorConfig& c, double v) { c.stop_field_norm = v; }},
      {"stop_mrs_dispersion", [](IntegratorConfig& c, double v) { c.stop_mrs_dispersion = v; }},
      {"max_time", [](IntegratorConfig& c, double v) { c.max_time = v; }},
      {"max_steps",
       [](IntegratorConfig& c, double v) {
         if (v != std::floor(v)) throw ValidationError("max_steps must be an integer");
         c.max_steps = static_cast<std::int64_t>(v);
       }},
      {"boundary_floor", [](IntegratorConfig& c, double v) { c.boundary_floor = v; }},
      {"time_scale", [](IntegratorConfig& c, double v) { c.time_scale = v; }},
      {"stride",
       [](IntegratorConfig& c, double v) {
         if (v != std::floor(v)) throw ValidationError("stride must be an integer");
         c.stride = static_cast<int>(v);
       }},
  };
  return fields;
}

IntegratorConfig parse_integrator(const json& obj, const std::string& path) {
  IntegratorConfig config;
  if (!obj.is_object()) fail(path, "expected an object");
  const auto& fields = integrator_fields();
  for (const auto& [key, value] : obj.items()) {
    const std::string field_path = path + "." + key;
    auto it = fields.find(key);
    if (it == fields.end()) fail(field_path, "unknown field");
    at_path(field_path, [&] { it->second(config, as_number(value, field_path)); });
  }
  at_path(path, [&] { config.validate(); });
  return config;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(origin) + ": " + e.what());
  }
  reject_unknown(doc, "", {"name", "description", "goods", "agents", "network", "integrator"});

  Scenario s;
  s.name = as_string(require(doc, "name", ""), "name");
  if (auto it = doc.find("description"); it != doc.end()) s.description = as_string(*it, "description");

  const json& agents = require(doc, "agents", "");
  if (!agents.is_array()) fail("agents", "expected an array");
  if (agents.size() < 2) fail("agents", "at least two agents are required");

  std::vector<std::vector<double>> exponents;
  std::vector<std::vector<double>> endowments;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& a = agents[i];
    reject_unknown(a, path, {"label", "exponents", "endowment"});
    s.agent_labels.push_back(a.contains("label") ? as_string(a["label"], path + ".label")
                                                 : "agent " + std::to_string(i + 1));
    exponents.push_back(as_numbers(require(a, "exponents", path), path + ".exponents"));
    endowments.push_back(as_numbers(require(a, "endowment", path), path + ".endowment"));
  }

  const std::size_t m = exponents.front().size();
  if (m < 2) fail("agents[0].exponents", "at least two goods are required");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    if (exponents[i].size() != m) {
      throw DimensionError(path + ".exponents: expected " + std::to_string(m) + " entries");
    }
    if (endowments[i].size() != m) {
      throw DimensionError(path + ".endowment: expected " + std::to_string(m) + " entries");
    }
    try {
      UtilityParams::from_agents({exponents[i]});
    } catch (const ValidationError& e) {
      throw ValidationError(path + ".exponents: " + e.what());
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (!(endowments[i][k] > 0.0) || !std::isfinite(endowments[i][k])) {
        throw BoundaryError(path + ".endowment[" + std::to_string(k) +
                            "]: endowments must be strictly positive (interior start)");
      }
    }
  }

  if (auto it = doc.find("goods"); it != doc.end()) {
    if (!it->is_array() || it->size() != m) fail("goods", "expected " + std::to_string(m) + " labels");
    for (std::size_t k = 0; k < m; ++k) s.good_labels.push_back(as_string((*it)[k], "goods[" + std::to_string(k) + "]"));
  } else {
    for (std::size_t k = 0; k < m; ++k) s.good_labels.push_back("good " + std::to_string(k + 1));
  }

  s.params = at_path("agents[*].exponents", [&] { return UtilityParams::from_agents(exponents); });
  s.endowments = Allocation::from_bundles(endowments);

  const json& network = require(doc, "network", "");
  reject_unknown(network, "network", {"probabilities"});
  const auto p = as_numbers(require(network, "probabilities", "network"), "network.probabilities");
  if (p.size() != agents.size()) {
    throw DimensionError("network.probabilities: expected " + std::to_string(agents.size()) + " entries");
  }
  s.probabilities = Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
  at_path("network.probabilities", [&] { validate_probabilities(s.probabilities); });

  if (auto it = doc.find("integrator"); it != doc.end()) s.integrator = parse_integrator(*it, "integrator");

  if (!(s.endowments.min_holding() > s.integrator.boundary_floor)) {
    throw BoundaryError("agents[*].endowment: endowments must lie above the boundary floor");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const Scenario& s) {
  // Built by hand so that numbers use shortest round-trip formatting.
  std::ostringstream os;
  auto numbers = [&](const auto& values) {
    os << "[";
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(values.size()); ++k) {
      os << (k ? ", " : "") << format_double(values[k]);
    }
    os << "]";
  };
  os << "{\n  \"name\": " << json(s.name).dump() << ",\n";
  os << "  \"description\": " << json(s.description).dump() << ",\n";
  os << "  \"goods\": " << json(s.good_labels).dump() << ",\n";
  os << "  \"agents\": [\n";
  for (int i = 0; i < s.agents(); ++i) {
    os << "    {\"label\": " << json(s.agent_labels[i]).dump() << ", \"exponents\": ";
    numbers(Vector(s.params.agent(i)));
    os << ", \"endowment\": ";
    numbers(Vector(s.endowments.bundle(i)));
    os << "}" << (i + 1 < s.agents() ? "," : "") << "\n";
  }
  os << "  ],\n  \"network\": {\"probabilities\": ";
  numbers(s.probabilities);
  const IntegratorConfig& c = s.integrator;
  os << "},\n  \"integrator\": {\n"
     << "    \"initial_step\": " << format_double(c.initial_step) << ",\n"
     << "    \"relative_error_target\": " << format_double(c.relative_error_target) << ",\n"
     << "    \"stop_field_norm\": " << format_double(c.stop_field_norm) << ",\n"
     << "    \"stop_mrs_dispersion\": " << format_double(c.stop_mrs_dispersion) << ",\n"
     << "    \"max_time\": " << format_double(c.max_time) << ",\n"
     << "    \"max_steps\": " << c.max_steps << ",\n"
     << "    \"boundary_floor\": " << format_double(c.boundary_floor) << ",\n"
     << "    \"time_scale\": " << format_double(c.time_scale) << ",\n"
     << "    \"stride\": " << c.stride << "\n  }\n}\n";
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void apply_tolerance_overrides(IntegratorConfig& config, std::string_view overrides) {
  const auto& fields = integrator_fields();
  std::size_t pos = 0;
  while (pos < overrides.size()) {
    std::size_t end = overrides.find(',', pos);
    if (end == std::string_view::npos) end = overrides.size();
    const std::string_view item = overrides.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("tolerance override '" + std::string(item) + "' is not key=value");
    }
    const std::string key(trim(item.substr(0, eq)));
    const std::string_view value = trim(item.substr(eq + 1));
    auto it = fields.find(key);
    if (it == fields.end()) throw ValidationError("unknown integrator setting '" + key + "'");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw ValidationError("integrator." + key + ": '" + std::string(value) + "' is not a number");
    }
    it->second(config, v);
  }
  config.validate();
}

std::filesystem::path bundled_scenario_dir() {
  if (const char* env = std::getenv("EDGEWORTH_SCENARIO_DIR"); env != nullptr && *env != '\0') return env;
  return EDGEWORTH_SCENARIO_DIR;
}

std::vector<BundledScenario> list_bundled_scenarios(const std::filesystem::path& dir) {
  std::vector<BundledScenario> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    Scenario s = load_scenario(entry.path());
    out.push_back({s.name, s.description, entry.path(), s.agents(), s.goods()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

Scenario resolve_scenario(std::string_view name_or_path) {
  const std::filesystem::path path{std::string(name_or_path)};
  if (std::filesystem::is_regular_file(path)) return load_scenario(path);
  const std::filesystem::path bundled = bundled_scenario_dir() / (std::string(name_or_path) + ".json");
  if (std::filesystem::is_regular_file(bundled)) return load_scenario(bundled);
  throw ParseError("no scenario file or bundled scenario named '" + std::string(name_or_path) + "'");
}

IntegrationResult integrate_to_equilibrium(const Scenario& scenario) {
  return integrate_to_equilibrium(scenario.endowments, scenario.params, scenario.network(), scenario.integrator);
}

}  // namespace edgeworth
