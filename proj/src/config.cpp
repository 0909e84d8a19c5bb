#include "spinbath/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace spinbath {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownOutputs = {"trace_distance", "concurrence",
                                             "discord", "gap", "rho"};

// Byte offset -> "line L, column C" for parse error messages.
std::string locate(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json state_to_json(const Matrix4c& rho) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) {
      row.push_back({rho(i, j).real(), rho(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

Matrix4c state_from_json(const json& rows) {
  if (!rows.is_array() || rows.size() != 4) {
    throw std::domain_error("initial_state: expected a 4x4 matrix");
  }
  Matrix4c rho;
  for (int i = 0; i < 4; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != 4) {
      throw std::domain_error("initial_state: expected a 4x4 matrix");
    }
    for (int j = 0; j < 4; ++j) {
      const json& entry = row[j];
      if (!entry.is_array() || entry.size() != 2) {
        throw std::domain_error(
            "initial_state: entries must be [re, im] pairs");
      }
      rho(i, j) = complexd(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return rho;
}

ModelParams params_from_json(const json& j) {
  ModelParams p{};
  p.omega1 = j.at("omega1").get<double>();
  p.omega2 = j.at("omega2").get<double>();
  p.delta = j.at("delta").get<double>();
  p.omega_a = j.at("omega_a").get<double>();
  p.omega_b = j.at("omega_b").get<double>();
  p.eps1 = j.at("eps1").get<double>();
  p.eps2 = j.at("eps2").get<double>();
  p.M = j.at("M").get<int>();
  p.N = j.at("N").get<int>();
  p.T = j.at("T").get<double>();
  return p;
}

json params_to_json(const ModelParams& p) {
  return json{{"omega1", p.omega1}, {"omega2", p.omega2}, {"delta", p.delta},
              {"omega_a", p.omega_a}, {"omega_b", p.omega_b},
              {"eps1", p.eps1},     {"eps2", p.eps2},
              {"M", p.M},           {"N", p.N},
              {"T", p.T}};
}

// Common parameter set of the built-in configurations.
ModelParams base_params() {
  return ModelParams{2.0, 1.9, 2.5, 1.1, 1.2, 2.6, 2.5, 100, 100, 1.0};
}

}  // namespace

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> grid(t_steps);
  for (int i = 0; i < t_steps; ++i) {
    grid[i] = t_max * double(i) / double(t_steps - 1);
  }
  return grid;
}

void RunConfig::validate() const {
  params.validate();
  if (!(t_max > 0.0)) throw std::domain_error("config: t_max must be > 0");
  if (t_steps < 2) throw std::domain_error("config: t_steps must be >= 2");
  if (threads < 1) throw std::domain_error("config: threads must be >= 1");
  for (const auto& o : outputs) {
    if (!kKnownOutputs.count(o)) {
      throw std::domain_error("config: unknown output \"" + o + "\"");
    }
  }
  validate_density_matrix(initial_state, "config: initial_state");
}

Matrix4c named_state(const std::string& name) {
  if (name == "11") return state_11();
  if (name == "10") return state_10();
  if (name == "bell") return state_bell();
  throw std::domain_error("unknown initial state \"" + name +
                          "\" (expected 11, 10 or bell)");
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.params = base_params();
  cfg.t_max = 10.0;
  cfg.t_steps = 1000;
  cfg.threads = 1;
  if (name == "fig2a") {
    cfg.initial_state_name = "11";
    cfg.outputs = {"trace_distance"};
  } else if (name == "fig2b") {
    cfg.initial_state_name = "10";
    cfg.outputs = {"trace_distance"};
  } else if (name == "fig3a") {
    cfg.params.delta = 5.0;
    cfg.initial_state_name = "11";
    cfg.outputs = {"gap"};
  } else if (name == "fig3b") {
    cfg.params.delta = 5.0;
    cfg.initial_state_name = "10";
    cfg.outputs = {"gap"};
  } else if (name == "fig4") {
    cfg.params.delta = 3.0;
    cfg.params.eps1 = 1.3;
    cfg.params.eps2 = 1.25;
    cfg.initial_state_name = "bell";
    cfg.outputs = {"concurrence", "discord"};
  } else {
    throw std::domain_error("unknown preset \"" + name + "\"");
  }
  cfg.initial_state = named_state(cfg.initial_state_name);
  cfg.output_path = name + ".csv";
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4"};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + " at " +
                                locate(text, e.byte) + ": " + e.what());
  }

  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kConfigSchemaVersion) {
    throw std::domain_error("config: missing or unsupported schema_version "
                            "(expected " +
                            std::to_string(kConfigSchemaVersion) + ")");
  }

  RunConfig cfg;
  cfg.params = params_from_json(j.at("params"));
  const json& state = j.at("initial_state");
  if (state.is_string()) {
    cfg.initial_state_name = state.get<std::string>();
    cfg.initial_state = named_state(cfg.initial_state_name);
  } else {
    cfg.initial_state = state_from_json(state);
  }
  cfg.t_max = j.value("t_max", 10.0);
  cfg.t_steps = j.value("t_steps", 1000);
  cfg.outputs = j.value("outputs", std::vector<std::string>{});
  cfg.output_path = j.value("output_path", std::string{});
  cfg.threads = j.value("threads", 1);
  cfg.validate();
  return cfg;
}

void save_config(const RunConfig& config, const std::string& path) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["params"] = params_to_json(config.params);
  if (!config.initial_state_name.empty()) {
    j["initial_state"] = config.initial_state_name;
  } else {
    j["initial_state"] = state_to_json(config.initial_state);
  }
  j["t_max"] = config.t_max;
  j["t_steps"] = config.t_steps;
  j["outputs"] = config.outputs;
  j["output_path"] = config.output_path;
  j["threads"] = config.threads;

  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write config file: " + path);
  }
  out << j.dump(2) << "\n";
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace spinbath
