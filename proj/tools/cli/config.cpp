// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/cli/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hsps/error.hpp"

namespace hsps::cli {
namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double parse_number(std::string_view text, const std::string& field) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(field, field + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, const std::string& field) {
  const auto s = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) return v;
  // Accept integral floating literals such as 1e7.
  const double d = parse_number(text, field);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError(field, field + ": '" + std::string(text) + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

bool parse_bool(std::string_view text, const std::string& field) {
  const auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(field, field + ": '" + std::string(text) + "' is not a boolean");
}

// A display unit is SI * `up` / `down`; one of the two is 1 so the conversion
// is a single correctly rounded operation.
struct Unit {
  double up = 1.0;
  double down = 1.0;
  double to_si(double v) const { return up != 1.0 ? v * up : v / down; }
};
constexpr Unit kSame{};

// Value in display units whose conversion back to SI reproduces `si` exactly.
double to_unit(double si, Unit u) {
  const double guess = u.up != 1.0 ? si / u.up : si * u.down;
  if (u.to_si(guess) == si) return guess;
  double lo = guess, hi = guess;
  for (int i = 0; i < 8; ++i) {
    lo = std::nextafter(lo, -INFINITY);
    hi = std::nextafter(hi, INFINITY);
    if (u.to_si(lo) == si) return lo;
    if (u.to_si(hi) == si) return hi;
  }
  return guess;
}

// One config key: how to read it into and write it out of a RunConfig.
struct Key {
  std::string section;
  std::string name;
  //! field name used by the core validators, if different
  std::string core_field;
  std::function<void(RunConfig&, std::string_view, const std::string&)> read;
  std::function<std::string(const RunConfig&)> write;
};

template <class Get>
Key number_key(std::string section, std::string name, std::string core, Unit unit, Get get) {
  Key k{section, name, std::move(core), {}, {}};
  k.read = [get, unit](RunConfig& c, std::string_view v, const std::string& f) {
    get(c) = unit.to_si(parse_number(v, f));
  };
  k.write = [get, unit](const RunConfig& c) {
    RunConfig copy = c;
    return format_double(to_unit(get(copy), unit));
  };
  return k;
}

void add_detector_keys(std::vector<Key>& keys, const std::string& name,
                       DetectorModel SimScenario::*det, bool gated) {
  auto get = [det](auto field) {
    return [det, field](RunConfig& c) -> double& { return c.scenario.*det.*field; };
  };
  keys.push_back(number_key(name, "efficiency", name + ".efficiency", kSame,
                            get(&DetectorModel::efficiency)));
  if (gated) {
    keys.push_back(number_key(name, "dark_prob_per_gate", name + ".dark_prob_per_gate", kSame,
                              get(&DetectorModel::dark_prob_per_gate)));
    keys.push_back(number_key(name, "gate_window_ps", name + ".gate_window_ps", kSame,
                              get(&DetectorModel::gate_window_ps)));
    keys.push_back(number_key(name, "dead_time_us", name + ".dead_time_s", Unit{1.0, 1e6},
                              get(&DetectorModel::dead_time_s)));
  } else {
    keys.push_back(number_key(name, "dark_rate_hz", name + ".dark_rate_hz", kSame,
                              get(&DetectorModel::dark_rate_hz)));
    keys.push_back(number_key(name, "dead_time_ns", name + ".dead_time_s", Unit{1.0, 1e9},
                              get(&DetectorModel::dead_time_s)));
  }
  keys.push_back(number_key(name, "jitter_fwhm_ps", name + ".jitter_fwhm_ps", kSame,
                            get(&DetectorModel::jitter_fwhm_ps)));
}

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    auto src = [](auto field) {
      return [field](RunConfig& c) -> double& { return c.scenario.source.*field; };
    };
    auto scn = [](auto field) {
      return [field](RunConfig& c) -> double& { return c.scenario.*field; };
    };
    using S = SourceConfig;
    k.push_back(number_key("laser", "rep_rate_ghz", "source.rep_rate_hz", Unit{1e9, 1.0},
                           src(&S::rep_rate_hz)));
    k.push_back(number_key("laser", "power_mw", "source.laser_power_mw", kSame,
                           src(&S::laser_power_mw)));
    k.push_back(number_key("shg", "efficiency", "source.shg_efficiency", kSame,
                           src(&S::shg_efficiency)));
    k.push_back(number_key("shg", "exponent", "source.shg_exponent", kSame,
                           src(&S::shg_exponent)));
    k.push_back(number_key("spdc", "brightness_per_mw_s_ghz", "source.brightness", kSame,
                           src(&S::brightness)));
    k.push_back(Key{"spdc", "statistics", "source.statistics",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      try {
                        c.scenario.source.statistics = parse_pair_statistics(trim(v));
                      } catch (const DomainError& e) {
                        throw ConfigError(f, f + ": " + e.what());
                      }
                    },
                    [](const RunConfig& c) {
                      return std::string(to_string(c.scenario.source.statistics));
                    }});
    k.push_back(number_key("spdc", "spurious_mode_weight", "source.spurious_mode_weight", kSame,
                           src(&S::spurious_mode_weight)));
    k.push_back(number_key("filters", "heralding_bw_ghz", "source.heralding_bw_ghz", kSame,
                           src(&S::heralding_bw_ghz)));
    k.push_back(number_key("filters", "heralded_bw_ghz", "source.heralded_bw_ghz", kSame,
                           src(&S::heralded_bw_ghz)));
    k.push_back(number_key("losses", "gamma", "source.gamma", kSame, src(&S::gamma)));
    k.push_back(number_key("losses", "signal_db", "source.signal_loss_db", kSame,
                           src(&S::signal_loss_db)));
    k.push_back(number_key("losses", "idler_db", "source.idler_loss_db", kSame,
                           src(&S::idler_loss_db)));
    k.push_back(number_key("losses", "signal_excess_db", "source.signal_excess_loss_db", kSame,
                           src(&S::signal_excess_loss_db)));
    k.push_back(number_key("losses", "idler_excess_db", "source.idler_excess_loss_db", kSame,
                           src(&S::idler_excess_loss_db)));
    add_detector_keys(k, "sspd", &SimScenario::sspd, false);
    add_detector_keys(k, "apd1", &SimScenario::apd1, true);
    add_detector_keys(k, "apd2", &SimScenario::apd2, true);
    k.push_back(number_key("tac", "apd1_window_ps", "tac.apd1_window_ps", kSame,
                           scn(&SimScenario::tac1_window_ps)));
    k.push_back(number_key("tac", "apd2_window_ps", "tac.apd2_window_ps", kSame,
                           scn(&SimScenario::tac2_window_ps)));
    k.push_back(number_key("tac", "apd1_offset_ps", "tac.apd1_offset_ps", kSame,
                           scn(&SimScenario::tac1_offset_ps)));
    k.push_back(number_key("tac", "apd2_offset_ps", "tac.apd2_offset_ps", kSame,
                           scn(&SimScenario::tac2_offset_ps)));
    k.push_back(Key{"tac", "apd2_trigger_jitter", "tac.apd2_trigger_jitter",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.apd2_trigger_jitter = parse_bool(v, f);
                    },
                    [](const RunConfig& c) {
                      return std::string(c.scenario.apd2_trigger_jitter ? "true" : "false");
                    }});
    k.push_back(Key{"modes", "n_spectral", "modes.n_spectral",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.modes.n_spectral = static_cast<int>(parse_unsigned(v, f));
                    },
                    [](const RunConfig& c) { return std::to_string(c.scenario.modes.n_spectral); }});
    k.push_back(Key{"modes", "n_temporal", "modes.n_temporal",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.modes.n_temporal = static_cast<int>(parse_unsigned(v, f));
                    },
                    [](const RunConfig& c) { return std::to_string(c.scenario.modes.n_temporal); }});
    k.push_back(Key{"modes", "mu_per_mode", "modes.mu_per_mode",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.modes.mu_per_mode = parse_number(v, f);
                    },
                    [](const RunConfig& c) {
                      return format_double(c.scenario.modes.mu_per_mode);
                    }});
    k.push_back(Key{"run", "duration", "run.duration",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      try {
                        c.scenario.duration_s = parse_duration(v);
                      } catch (const DomainError& e) {
                        throw ConfigError(f, f + ": " + e.what());
                      }
                    },
                    [](const RunConfig& c) { return format_double(c.scenario.duration_s) + "s"; }});
    k.push_back(Key{"run", "seed", "run.seed",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.seed = parse_unsigned(v, f);
                    },
                    [](const RunConfig& c) { return std::to_string(c.scenario.seed); }});
    k.push_back(Key{"run", "block_size_pulses", "run.block_size_pulses",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      c.scenario.block_size_pulses = parse_unsigned(v, f);
                    },
                    [](const RunConfig& c) { return std::to_string(c.scenario.block_size_pulses); }});
    k.push_back(Key{"run", "threads", "run.threads",
                    [](RunConfig& c, std::string_view v, const std::string& f) {
                      const auto n = parse_unsigned(v, f);
                      if (n == 0 || n > 4096) throw ConfigError(f, f + ": must be in [1, 4096]");
                      c.threads = static_cast<unsigned>(n);
                    },
                    [](const RunConfig& c) { return std::to_string(c.threads); }});
    return k;
  }();
  return keys;
}

const std::array<const char*, 11> kSections{"laser", "shg",  "spdc", "filters", "losses", "sspd",
                                             "apd1",  "apd2", "tac",  "modes",   "run"};

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_duration(std::string_view text) {
  auto s = trim(text);
  double per_second = 1.0;
  for (const auto& [suffix, k] : std::array<std::pair<std::string_view, double>, 4>{
           {{"ns", 1e9}, {"us", 1e6}, {"ms", 1e3}, {"s", 1.0}}}) {
    if (s.ends_with(suffix)) {
      per_second = k;
      s = trim(s.substr(0, s.size() - suffix.size()));
      break;
    }
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v) ||
      v <= 0.0) {
    throw DomainError("'" + std::string(text) +
                      "' is not a positive duration (use ns, us, ms or s)");
  }
  return v / per_second;
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message(),
                      static_cast<int>(e.line()));
  }

  std::map<std::string, const Key*> by_name;
  for (const auto& k : schema()) by_name[k.section + "." + k.name] = &k;

  RunConfig c;
  bool mu_given = false, nf_given = false, nt_given = false;
  for (const auto& [section, body] : tree) {
    if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
      throw ConfigError(section, "unknown section [" + section + "]");
    }
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "'" + section + "' must be a [section], not a bare key");
    }
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      const auto it = by_name.find(field);
      if (it == by_name.end()) throw ConfigError(field, "unknown key " + field);
      it->second->read(c, value.data(), field);
      mu_given |= field == "modes.mu_per_mode";
      nf_given |= field == "modes.n_spectral";
      nt_given |= field == "modes.n_temporal";
    }
  }

  SimScenario& s = c.scenario;
  try {
    validate(s.source);
    if (!mu_given) s.modes.mu_per_mode = source_mean_pairs(s.source);
    const auto counts = mode_counts(s.source.heralded_bw_ghz, s.source.heralding_bw_ghz,
                                    s.tac2_window_ps, s.source.pulse_period_ps());
    if (!nf_given) s.modes.n_spectral = counts.spectral;
    if (!nt_given) s.modes.n_temporal = counts.temporal;
    validate(s);
  } catch (const ConfigError& e) {
    for (const auto& k : schema()) {
      if (k.core_field == e.field()) {
        const std::string field = k.section + "." + k.name;
        std::string what = e.what();
        if (what.starts_with(k.core_field)) what.erase(0, k.core_field.size() + 2);
        throw ConfigError(field, field + ": " + what);
      }
    }
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("", e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  std::string current;
  for (const auto& k : schema()) {
    if (k.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << k.section << "]\n";
      current = k.section;
    }
    os << k.name << " = " << k.write(c) << '\n';
  }
  return os.str();
}

}  // namespace hsps::cli
