// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/run_config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hdfnet/error.h"

namespace hdf {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& v) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidArgument("expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw InvalidArgument("expected a number, got '" + v + "'");
  }
  return out;
}

std::optional<FilterMode> parse_stage_mode(const std::string& v) {
  if (v == "none") return std::nullopt;
  return parse_filter_mode(v);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"stage1_channels",
       [](RunConfig& r, const std::string& v) { r.model.stage1_channels = parse_count(v); }},
      {"stage2_channels",
       [](RunConfig& r, const std::string& v) { r.model.stage2_channels = parse_count(v); }},
      {"conv_repeats",
       [](RunConfig& r, const std::string& v) { r.model.conv_repeats = parse_count(v); }},
      {"taconv_repeats",
       [](RunConfig& r, const std::string& v) { r.model.taconv_repeats = parse_count(v); }},
      {"dprnn_repeats",
       [](RunConfig& r, const std::string& v) { r.model.dprnn_repeats = parse_count(v); }},
      {"df_order",
       [](RunConfig& r, const std::string& v) { r.model.df_order = parse_count(v); }},
      {"sbf_k", [](RunConfig& r, const std::string& v) { r.model.sbf_k = parse_count(v); }},
      {"stage1_mode",
       [](RunConfig& r, const std::string& v) { r.model.stage1_mode = parse_stage_mode(v); }},
      {"stage2_mode",
       [](RunConfig& r, const std::string& v) { r.model.stage2_mode = parse_stage_mode(v); }},
      {"erb_low_kept",
       [](RunConfig& r, const std::string& v) { r.model.erb_low_kept = parse_count(v); }},
      {"erb_high_bands",
       [](RunConfig& r, const std::string& v) { r.model.erb_high_bands = parse_count(v); }},
      {"gru_groups",
       [](RunConfig& r, const std::string& v) { r.model.gru_groups = parse_count(v); }},
      {"bn_eps", [](RunConfig& r, const std::string& v) { r.model.bn_eps = parse_real(v); }},
      {"sample_rate",
       [](RunConfig& r, const std::string& v) {
         r.model.sample_rate = static_cast<int>(parse_count(v));
       }},
      {"window_len",
       [](RunConfig& r, const std::string& v) { r.model.stft.window_len = parse_count(v); }},
      {"hop", [](RunConfig& r, const std::string& v) { r.model.stft.hop = parse_count(v); }},
      {"fft_size",
       [](RunConfig& r, const std::string& v) { r.model.stft.fft_size = parse_count(v); }},
      {"window",
       [](RunConfig& r, const std::string& v) {
         if (v != "hann") throw InvalidArgument("unsupported window '" + v + "'");
         r.model.stft.window = WindowKind::kHann;
       }},
      {"loss_c", [](RunConfig& r, const std::string& v) { r.loss.c = parse_real(v); }},
      {"loss_alpha", [](RunConfig& r, const std::string& v) { r.loss.alpha = parse_real(v); }},
      {"loss_beta", [](RunConfig& r, const std::string& v) { r.loss.beta = parse_real(v); }},
      {"weights", [](RunConfig& r, const std::string& v) { r.weights_path = v; }},
      {"input", [](RunConfig& r, const std::string& v) { r.input_path = v; }},
      {"output", [](RunConfig& r, const std::string& v) { r.output_path = v; }},
  };
  return table;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(where + "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw FormatError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw FormatError(where + "duplicate key '" + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const InvalidArgument& e) {
      throw FormatError(where + key + ": " + e.what());
    }
  }
  try {
    cfg.model.validate();
    cfg.loss.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string RunConfig::to_string() const {
  auto mode = [](const std::optional<FilterMode>& m) {
    return m ? std::string(hdf::to_string(*m)) : std::string("none");
  };
  std::ostringstream os;
  os.precision(17);
  const ModelConfig& m = model;
  os << "stage1_channels = " << m.stage1_channels << "\n"
     << "stage2_channels = " << m.stage2_channels << "\n"
     << "conv_repeats = " << m.conv_repeats << "\n"
     << "taconv_repeats = " << m.taconv_repeats << "\n"
     << "dprnn_repeats = " << m.dprnn_repeats << "\n"
     << "df_order = " << m.df_order << "\n"
     << "sbf_k = " << m.sbf_k << "\n"
     << "stage1_mode = " << mode(m.stage1_mode) << "\n"
     << "stage2_mode = " << mode(m.stage2_mode) << "\n"
     << "erb_low_kept = " << m.erb_low_kept << "\n"
     << "erb_high_bands = " << m.erb_high_bands << "\n"
     << "gru_groups = " << m.gru_groups << "\n"
     << "bn_eps = " << m.bn_eps << "\n"
     << "sample_rate = " << m.sample_rate << "\n"
     << "window_len = " << m.stft.window_len << "\n"
     << "hop = " << m.stft.hop << "\n"
     << "fft_size = " << m.stft.fft_size << "\n"
     << "window = hann\n"
     << "loss_c = " << loss.c << "\n"
     << "loss_alpha = " << loss.alpha << "\n"
     << "loss_beta = " << loss.beta << "\n";
  if (!weights_path.empty()) os << "weights = " << weights_path << "\n";
  if (!input_path.empty()) os << "input = " << input_path << "\n";
  if (!output_path.empty()) os << "output = " << output_path << "\n";
  return os.str();
}

}  // namespace hdf
