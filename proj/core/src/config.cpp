#include "cpdsss/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cpdsss/error.hpp"

namespace cpdsss {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, fmt::format("field '{}': {}", path, msg));
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    field_error(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

template <typename Fn>
auto as_list(const json& v, const std::string& path, Fn&& item) {
  using T = decltype(item(v, path));
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(item(v, path));  // a scalar is a one-element list
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], fmt::format("{}[{}]", path, i)));
  return out;
}

CsiMode as_csi(const json& v, const std::string& path) {
  if (v == "perfect") return CsiMode::Perfect;
  if (v == "estimated") return CsiMode::Estimated;
  field_error(path, "expected \"perfect\" or \"estimated\"");
}

Direction as_direction(const json& v, const std::string& path) {
  if (v == "ul") return Direction::Uplink;
  if (v == "dl") return Direction::Downlink;
  field_error(path, "expected \"ul\" or \"dl\"");
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key)) field_error(prefix + key, "unknown key");
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    const auto [line, col] = line_and_column(text, err.byte);
    throw Error(ErrorCode::InvalidConfig, fmt::format("syntax error at line {}, column {}", line, col));
  }
  if (!doc.is_object()) field_error("/", "config must be a JSON object");

  reject_unknown(doc,
                 {"snr_db", "k", "m", "l", "n", "n_cp", "profile", "csi_mode", "direction", "trials",
                  "frames_per_trial", "seed", "zc_root", "symbols", "output"},
                 "");

  SweepConfig cfg;
  if (doc.contains("snr_db")) cfg.snr_db = as_list(doc["snr_db"], "snr_db", as_number);
  if (doc.contains("k")) cfg.k = as_list(doc["k"], "k", as_count);
  if (doc.contains("m")) cfg.m = as_list(doc["m"], "m", as_count);
  if (doc.contains("l")) cfg.l = as_count(doc["l"], "l");
  if (doc.contains("n")) cfg.n = as_count(doc["n"], "n");
  if (doc.contains("n_cp")) cfg.n_cp = as_count(doc["n_cp"], "n_cp");
  if (doc.contains("profile")) {
    const json& p = doc["profile"];
    if (!p.is_object()) field_error("profile", "expected an object");
    reject_unknown(p, {"l_h", "tau", "normalize"}, "profile.");
    if (p.contains("l_h")) cfg.profile.l_h = as_count(p["l_h"], "profile.l_h");
    if (p.contains("tau")) cfg.profile.tau = as_number(p["tau"], "profile.tau");
    if (p.contains("normalize")) {
      if (!p["normalize"].is_boolean()) field_error("profile.normalize", "expected a boolean");
      cfg.profile.normalize = p["normalize"].get<bool>();
    }
  }
  if (doc.contains("csi_mode")) cfg.csi_modes = as_list(doc["csi_mode"], "csi_mode", as_csi);
  if (doc.contains("direction")) cfg.directions = as_list(doc["direction"], "direction", as_direction);
  if (doc.contains("trials")) cfg.trials = as_count(doc["trials"], "trials");
  if (doc.contains("frames_per_trial")) cfg.frames_per_trial = as_count(doc["frames_per_trial"], "frames_per_trial");
  if (doc.contains("seed")) cfg.seed = as_count(doc["seed"], "seed");
  if (doc.contains("zc_root")) {
    if (!doc["zc_root"].is_number_integer()) field_error("zc_root", "expected an integer");
    cfg.zc_root = doc["zc_root"].get<std::int64_t>();
  }
  if (doc.contains("symbols")) {
    const json& s = doc["symbols"];
    if (s == "qpsk") cfg.symbol_source = SymbolSource::Qpsk;
    else if (s == "gaussian") cfg.symbol_source = SymbolSource::Gaussian;
    else field_error("symbols", "expected \"qpsk\" or \"gaussian\"");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) field_error("output", "expected a string");
    cfg.output = doc["output"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read config {}", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sweep_config(text.str());
}

}  // namespace cpdsss
