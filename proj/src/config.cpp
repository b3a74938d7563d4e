#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wlcae/errors.hpp"
#include "wlcae/trainer.hpp"

namespace wlcae {

std::string to_string(CostTag t) {
  switch (t) {
    case CostTag::Mse: return "mse";
    case CostTag::NormalizedMse: return "normalized-mse";
    case CostTag::PhaseAmplitude: return "phase-amplitude";
  }
  return "unknown";
}

std::string to_string(EvalSplit s) { return s == EvalSplit::Train ? "train" : "heldout"; }

CostTag parse_cost_tag(const std::string& s) {
  if (s == "mse") return CostTag::Mse;
  if (s == "normalized-mse") return CostTag::NormalizedMse;
  if (s == "phase-amplitude") return CostTag::PhaseAmplitude;
  throw ConfigError("unknown cost '" + s + "' (mse|normalized-mse|phase-amplitude)");
}

EvalSplit parse_eval_split(const std::string& s) {
  if (s == "train") return EvalSplit::Train;
  if (s == "heldout") return EvalSplit::HeldOut;
  throw ConfigError("unknown eval split '" + s + "' (train|heldout)");
}

CostKind ExperimentConfig::cost_kind() const {
  switch (cost) {
    case CostTag::Mse: return Mse{};
    case CostTag::NormalizedMse: return NormalizedMse{beta};
    case CostTag::PhaseAmplitude: return PhaseAmplitude{alpha, beta};
  }
  return Mse{};
}

void ExperimentConfig::validate() const {
  if (hidden == 0) throw ConfigError("hidden must be > 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("lr must be > 0");
  if (!(codec_scale > 0.0) || !std::isfinite(codec_scale)) throw ConfigError("codec-scale must be > 0");
  if (samples_per_class == 0) throw ConfigError("samples-per-class must be > 0");
  if (log_every == 0) throw ConfigError("log-every must be > 0");
  wlcae::validate(cost_kind());
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be > 0");
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
  if (used != v.size()) throw ConfigError(key + ": '" + v + "' is not a number");
  return d;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key + ": '" + v + "' is not a non-negative integer");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is out of range");
  }
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(key + ": value out of range");
  return static_cast<std::uint32_t>(x);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  return {
      {"codec", to_string(c.codec)},
      {"codec-scale", fmt_double(c.codec_scale)},
      {"mode", to_string(c.mode)},
      {"hidden", std::to_string(c.hidden)},
      {"activation", to_string(c.activation)},
      {"cost", to_string(c.cost)},
      {"alpha", fmt_double(c.alpha)},
      {"beta", fmt_double(c.beta)},
      {"lr", fmt_double(c.learning_rate)},
      {"epochs", std::to_string(c.epochs)},
      {"seed", std::to_string(c.seed)},
      {"samples-per-class", std::to_string(c.samples_per_class)},
      {"eval", to_string(c.eval)},
      {"log-every", std::to_string(c.log_every)},
      {"batch-size", std::to_string(c.batch_size)},
      {"init-scheme", to_string(c.init_scheme)},
      {"data-dir", c.data_dir},
  };
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "codec") c.codec = parse_codec_kind(value);
  else if (key == "codec-scale") c.codec_scale = parse_double(key, value);
  else if (key == "mode") c.mode = parse_linear_mode(value);
  else if (key == "hidden") c.hidden = parse_u32(key, value);
  else if (key == "activation") c.activation = parse_activation(value);
  else if (key == "cost") c.cost = parse_cost_tag(value);
  else if (key == "alpha") c.alpha = parse_double(key, value);
  else if (key == "beta") c.beta = parse_double(key, value);
  else if (key == "lr") c.learning_rate = parse_double(key, value);
  else if (key == "epochs") c.epochs = parse_u32(key, value);
  else if (key == "seed") c.seed = parse_u64(key, value);
  else if (key == "samples-per-class") c.samples_per_class = parse_u32(key, value);
  else if (key == "eval") c.eval = parse_eval_split(value);
  else if (key == "log-every") c.log_every = parse_u32(key, value);
  else if (key == "batch-size") c.batch_size = parse_u32(key, value);
  else if (key == "init-scheme") c.init_scheme = parse_init_scheme(value);
  else if (key == "data-dir") c.data_dir = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // '#' opens a comment at line start or after whitespace, so paths may contain it.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      set_config_value(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wlcae
