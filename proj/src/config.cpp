#include "coincsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "coincsim/error.hpp"

namespace coincsim {

namespace {

// ---------------------------------------------------------------- lexing

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax_error(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what, {}, line);
}

/// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (!quoted && s[i] == '#') return s.substr(0, i);
  }
  return s;
}

bool valid_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

std::string unquote(std::string_view v, std::size_t line) {
  if (v.size() < 2 || v.front() != '"') return std::string(v);
  if (v.back() != '"') syntax_error(line, "unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      out.push_back(v[++i]);
    } else if (v[i] == '"') {
      syntax_error(line, "unescaped quote inside string");
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

std::vector<Entry> lex(std::string_view text) {
  std::vector<Entry> entries;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> seen_sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') syntax_error(line_no, "section header missing ']'");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_identifier(name)) syntax_error(line_no, "invalid section name");
      static const std::set<std::string_view> known{"scenario",    "gating",      "source",      "source.metadata",
                                                    "detector.D1", "detector.D2", "detector.D3", "detector.trigger",
                                                    "metadata"};
      if (!known.count(name)) syntax_error(line_no, "unknown section [" + std::string(name) + "]");
      section = std::string(name);
      if (!seen_sections.insert(section).second) syntax_error(line_no, "duplicate section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) syntax_error(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_identifier(key)) syntax_error(line_no, "invalid key");
    if (section.empty()) syntax_error(line_no, "key outside of any section");
    if (value.empty()) syntax_error(line_no, "missing value for '" + std::string(key) + "'");
    if (!seen.insert({section, std::string(key)}).second) {
      syntax_error(line_no, "duplicate key '" + std::string(key) + "'");
    }
    entries.push_back({section, std::string(key), unquote(value, line_no), line_no});
  }
  return entries;
}

// ---------------------------------------------------------------- values

std::string path_of(const Entry& e) { return e.section + "." + e.key; }

[[noreturn]] void value_error(const Entry& e, const std::string& what) {
  throw ConfigError("line " + std::to_string(e.line) + ": " + path_of(e) + ": " + what, path_of(e), e.line);
}

double parse_real(const Entry& e, std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) value_error(e, "expected a finite number, got '" + std::string(s) + "'");
  return v;
}

double parse_real(const Entry& e) { return parse_real(e, e.value); }

std::uint64_t parse_count(const Entry& e, std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  // Accept integral reals such as 1e12.
  const double d = parse_real(e, s);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) value_error(e, "expected a non-negative integer, got '" + std::string(s) + "'");
  return static_cast<std::uint64_t>(d);
}

std::uint64_t parse_count(const Entry& e) { return parse_count(e, e.value); }

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_real_list(const Entry& e) {
  std::vector<double> out;
  for (auto item : split_list(e.value)) out.push_back(parse_real(e, item));
  return out;
}

std::vector<std::uint64_t> parse_count_list(const Entry& e) {
  std::vector<std::uint64_t> out;
  for (auto item : split_list(e.value)) out.push_back(parse_count(e, item));
  return out;
}

template <class Enum>
Enum parse_word(const Entry& e, std::initializer_list<std::pair<std::string_view, Enum>> words) {
  for (const auto& [w, v] : words) {
    if (e.value == w) return v;
  }
  std::string allowed;
  for (const auto& [w, v] : words) allowed += (allowed.empty() ? "" : "|") + std::string(w);
  value_error(e, "expected one of " + allowed + ", got '" + e.value + "'");
}

// ---------------------------------------------------------------- formatting

std::string fmt_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string_view detector_section(Channel c) {
  switch (c) {
    case Channel::D1: return "detector.D1";
    case Channel::D2: return "detector.D2";
    default: return "detector.D3";
  }
}

// ---------------------------------------------------------------- sections

using Handler = std::function<void(const Entry&)>;
using HandlerMap = std::map<std::string, Handler, std::less<>>;

void dispatch(const Entry& e, const HandlerMap& handlers) {
  const auto it = handlers.find(e.key);
  if (it == handlers.end()) value_error(e, "unknown key");
  it->second(e);
}

HandlerMap detector_handlers(DetectorConfig& d) {
  return {
      {"efficiency", [&d](const Entry& e) { d.efficiency = parse_real(e); }},
      {"dark_rate_hz", [&d](const Entry& e) { d.dark_rate_hz = parse_real(e); }},
      {"dead_time_ps", [&d](const Entry& e) { d.dead_time_ps = parse_count(e); }},
      {"jitter_sigma_ps", [&d](const Entry& e) { d.jitter_sigma_ps = parse_real(e); }},
  };
}

SourceConfig parse_source(const std::vector<const Entry*>& entries, const std::vector<const Entry*>& metadata,
                          std::size_t section_line) {
  const Entry* model_entry = nullptr;
  for (const Entry* e : entries) {
    if (e->key == "model") model_entry = e;
  }
  if (!model_entry) {
    throw ConfigError("line " + std::to_string(section_line) + ": source.model is required", "source.model",
                      section_line);
  }
  const auto model = parse_word<SourceModel>(*model_entry, {{"pdc", SourceModel::Pdc},
                                                            {"coherent", SourceModel::Coherent},
                                                            {"thermal_independent", SourceModel::ThermalIndependent},
                                                            {"thermal_shared", SourceModel::ThermalShared},
                                                            {"classical_wave", SourceModel::ClassicalWave}});
  Metadata md;
  for (const Entry* e : metadata) md[e->key] = e->value;

  auto run = [&](const HandlerMap& handlers) {
    for (const Entry* e : entries) {
      if (e->key != "model") dispatch(*e, handlers);
    }
  };

  switch (model) {
    case SourceModel::Pdc: {
      PdcSourceConfig c;
      run({{"pair_rate_hz", [&](const Entry& e) { c.pair_rate_hz = parse_real(e); }},
           {"pair_jitter_ps", [&](const Entry& e) { c.pair_jitter_ps = parse_real(e); }},
           {"polarization_split", [&](const Entry& e) { c.polarization_split = parse_real(e); }}});
      c.metadata = std::move(md);
      return c;
    }
    case SourceModel::Coherent: {
      CoherentSourceConfig c;
      // mean_rate_hz sets both beams; per-beam keys override it.
      for (const Entry* e : entries) {
        if (e->key == "mean_rate_hz") c.beam1_rate_hz = c.beam2_rate_hz = parse_real(*e);
      }
      run({{"mean_rate_hz", [](const Entry&) {}},
           {"beam1_rate_hz", [&](const Entry& e) { c.beam1_rate_hz = parse_real(e); }},
           {"beam2_rate_hz", [&](const Entry& e) { c.beam2_rate_hz = parse_real(e); }}});
      c.metadata = std::move(md);
      return c;
    }
    case SourceModel::ThermalIndependent:
    case SourceModel::ThermalShared: {
      ThermalSourceConfig c;
      c.mode = model == SourceModel::ThermalShared ? ThermalMode::SharedSingleMode : ThermalMode::IndependentArms;
      run({{"mean_rate_hz", [&](const Entry& e) { c.mean_rate_hz = parse_real(e); }},
           {"coherence_time_ps", [&](const Entry& e) { c.coherence_time_ps = parse_real(e); }},
           {"split_fraction", [&](const Entry& e) { c.split_fraction = parse_real(e); }}});
      c.metadata = std::move(md);
      return c;
    }
    case SourceModel::ClassicalWave: {
      ClassicalWaveConfig c;
      run({{"herald_rate_hz", [&](const Entry& e) { c.herald_rate_hz = parse_real(e); }},
           {"per_gate_intensity_mean", [&](const Entry& e) { c.per_gate_intensity_mean = parse_real(e); }},
           {"split_fraction", [&](const Entry& e) { c.split_fraction = parse_real(e); }},
           {"intensity",
            [&](const Entry& e) {
              c.intensity_distribution = parse_word<IntensityDistribution>(
                  e, {{"constant", IntensityDistribution::Constant},
                      {"exponential", IntensityDistribution::Exponential},
                      {"mixture", IntensityDistribution::Mixture}});
            }},
           {"mixture_weight", [&](const Entry& e) { c.mixture_weight = parse_real(e); }}});
      c.metadata = std::move(md);
      return c;
    }
  }
  return PdcSourceConfig{};
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what, field);
}

}  // namespace

SourceModel source_model(const SourceConfig& s) noexcept {
  switch (s.index()) {
    case 0: return SourceModel::Pdc;
    case 1: return SourceModel::Coherent;
    case 2:
      return std::get<ThermalSourceConfig>(s).mode == ThermalMode::SharedSingleMode ? SourceModel::ThermalShared
                                                                                     : SourceModel::ThermalIndependent;
    default: return SourceModel::ClassicalWave;
  }
}

std::string_view to_string(SourceModel m) noexcept {
  switch (m) {
    case SourceModel::Pdc: return "pdc";
    case SourceModel::Coherent: return "coherent";
    case SourceModel::ThermalIndependent: return "thermal_independent";
    case SourceModel::ThermalShared: return "thermal_shared";
    case SourceModel::ClassicalWave: return "classical_wave";
  }
  return "?";
}

std::uint64_t ScenarioConfig::acquisitions_for_point(std::size_t point) const {
  return point < acquisitions_per_point.size() ? acquisitions_per_point[point] : acquisitions;
}

bool ScenarioConfig::periodic_gating() const noexcept {
  const SourceModel m = model();
  return m == SourceModel::Coherent || m == SourceModel::ThermalIndependent || m == SourceModel::ThermalShared;
}

void validate(const ScenarioConfig& cfg) {
  std::visit([](const auto& s) { validate(s); }, cfg.source);
  validate(cfg.d1);
  validate(cfg.d2);
  validate(cfg.trigger);
  require(cfg.d1.channel == Channel::D1, "detector.D1", "must be bound to channel D1");
  require(cfg.d2.channel == Channel::D2, "detector.D2", "must be bound to channel D2");
  require(cfg.trigger.channel == Channel::Trigger, "detector.D3", "must be bound to the trigger channel");

  require(cfg.acquisitions >= 1, "scenario.acquisitions", "must be at least 1");
  require(cfg.window_ps >= 1, "scenario.window_ps", "must be positive");
  require(cfg.window_ps < cfg.acquisition_duration_ps, "scenario.window_ps",
          "must be shorter than the acquisition duration");
  require(!cfg.sweep.empty(), "scenario.sweep", "needs at least one point");
  for (double m : cfg.sweep) {
    require(std::isfinite(m) && m > 0.0, "scenario.sweep", "multipliers must be finite and positive");
  }
  require(cfg.acquisitions_per_point.empty() || cfg.acquisitions_per_point.size() == cfg.sweep.size(),
          "scenario.acquisitions_per_point", "must list one count per sweep point");
  for (auto n : cfg.acquisitions_per_point) require(n >= 1, "scenario.acquisitions_per_point", "counts must be at least 1");
  if (cfg.weighted_points) {
    require(*cfg.weighted_points >= 1 && *cfg.weighted_points <= cfg.sweep.size(), "scenario.weighted_points",
            "must lie between 1 and the number of sweep points");
  }
  if (cfg.periodic_gating()) {
    require(std::isfinite(cfg.gate_rate_hz) && cfg.gate_rate_hz > 0.0, "gating.rate_hz", "must be finite and positive");
    require(static_cast<double>(cfg.window_ps) < std::round(1e12 / cfg.gate_rate_hz), "gating.rate_hz",
            "periodic gates overlap: window must be shorter than the period");
  }
  if (cfg.support == SupportMode::Gated) {
    require(cfg.periodic_gating(), "scenario.support", "gated support needs a periodically gated source");
    require(cfg.d1.dead_time_ps == 0 && cfg.d2.dead_time_ps == 0, "scenario.support",
            "gated support requires zero dead time on D1 and D2");
  }
  if (cfg.model() == SourceModel::ClassicalWave) {
    const auto& c = std::get<ClassicalWaveConfig>(cfg.source);
    const double top = *std::max_element(cfg.sweep.begin(), cfg.sweep.end());
    require(c.per_gate_intensity_mean * top <= kLinearResponseCap, "scenario.sweep",
            "scaled per-gate intensity exceeds the linear-response cap of 0.1");
  }
}

ScenarioConfig parse_config(std::string_view text) {
  const std::vector<Entry> entries = lex(text);
  ScenarioConfig cfg;
  std::optional<std::uint64_t> first_line_of_source;

  std::vector<const Entry*> source_entries;
  std::vector<const Entry*> source_metadata;

  HandlerMap scenario = {
      {"name", [&](const Entry& e) { cfg.name = e.value; }},
      {"window_ps", [&](const Entry& e) { cfg.window_ps = parse_count(e); }},
      {"acquisitions", [&](const Entry& e) { cfg.acquisitions = parse_count(e); }},
      {"acquisition_duration_ps", [&](const Entry& e) { cfg.acquisition_duration_ps = parse_count(e); }},
      {"sweep", [&](const Entry& e) { cfg.sweep = parse_real_list(e); }},
      {"acquisitions_per_point", [&](const Entry& e) { cfg.acquisitions_per_point = parse_count_list(e); }},
      {"weighted_points", [&](const Entry& e) { cfg.weighted_points = static_cast<std::size_t>(parse_count(e)); }},
      {"seed", [&](const Entry& e) { cfg.seed.master_seed = parse_count(e); }},
      {"support",
       [&](const Entry& e) {
         cfg.support = parse_word<SupportMode>(
             e, {{"auto", SupportMode::Auto}, {"full", SupportMode::Full}, {"gated", SupportMode::Gated}});
       }},
  };
  HandlerMap gating = {
      {"rate_hz", [&](const Entry& e) { cfg.gate_rate_hz = parse_real(e); }},
      {"policy",
       [&](const Entry& e) {
         cfg.gate_policy.overlap = parse_word<OverlapPolicy>(
             e, {{"drop_overlapping", OverlapPolicy::DropOverlapping}, {"allow_overlap", OverlapPolicy::AllowOverlap}});
       }},
      {"busy_extension_ps", [&](const Entry& e) { cfg.gate_policy.busy_extension_ps = parse_count(e); }},
  };
  const HandlerMap d1 = detector_handlers(cfg.d1);
  const HandlerMap d2 = detector_handlers(cfg.d2);
  const HandlerMap d3 = detector_handlers(cfg.trigger);

  for (const Entry& e : entries) {
    if (e.section == "scenario") {
      dispatch(e, scenario);
    } else if (e.section == "gating") {
      dispatch(e, gating);
    } else if (e.section == "source") {
      if (!first_line_of_source) first_line_of_source = e.line;
      source_entries.push_back(&e);
    } else if (e.section == "source.metadata") {
      source_metadata.push_back(&e);
    } else if (e.section == "detector.D1") {
      dispatch(e, d1);
    } else if (e.section == "detector.D2") {
      dispatch(e, d2);
    } else if (e.section == "detector.D3" || e.section == "detector.trigger") {
      dispatch(e, d3);
    } else if (e.section == "metadata") {
      cfg.metadata[e.key] = e.value;
    } else {
      syntax_error(e.line, "unknown section [" + e.section + "]");
    }
  }
  cfg.source = parse_source(source_entries, source_metadata, first_line_of_source.value_or(0));

  try {
    validate(cfg);
  } catch (const ConfigError& err) {
    // Point at the line that set the offending field, when there is one.
    for (const Entry& e : entries) {
      const std::string p = e.section == "detector.trigger" ? "detector.D3." + e.key : path_of(e);
      if (p == err.field()) throw ConfigError("line " + std::to_string(e.line) + ": " + err.what(), err.field(), e.line);
    }
    throw;
  }
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "name = " << quote(cfg.name) << "\n";
  os << "window_ps = " << cfg.window_ps << "\n";
  os << "acquisitions = " << cfg.acquisitions << "\n";
  os << "acquisition_duration_ps = " << cfg.acquisition_duration_ps << "\n";
  os << "sweep = ";
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) os << (i ? ", " : "") << fmt_real(cfg.sweep[i]);
  os << "\n";
  if (!cfg.acquisitions_per_point.empty()) {
    os << "acquisitions_per_point = ";
    for (std::size_t i = 0; i < cfg.acquisitions_per_point.size(); ++i) {
      os << (i ? ", " : "") << cfg.acquisitions_per_point[i];
    }
    os << "\n";
  }
  if (cfg.weighted_points) os << "weighted_points = " << *cfg.weighted_points << "\n";
  os << "seed = " << cfg.seed.master_seed << "\n";
  os << "support = " << (cfg.support == SupportMode::Auto ? "auto" : cfg.support == SupportMode::Full ? "full" : "gated")
     << "\n\n";

  os << "[gating]\n";
  os << "rate_hz = " << fmt_real(cfg.gate_rate_hz) << "\n";
  os << "policy = "
     << (cfg.gate_policy.overlap == OverlapPolicy::DropOverlapping ? "drop_overlapping" : "allow_overlap") << "\n";
  os << "busy_extension_ps = " << cfg.gate_policy.busy_extension_ps << "\n\n";

  os << "[source]\n";
  os << "model = " << to_string(cfg.model()) << "\n";
  const Metadata* md = nullptr;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        md = &s.metadata;
        if constexpr (std::is_same_v<T, PdcSourceConfig>) {
          os << "pair_rate_hz = " << fmt_real(s.pair_rate_hz) << "\n";
          os << "pair_jitter_ps = " << fmt_real(s.pair_jitter_ps) << "\n";
          os << "polarization_split = " << fmt_real(s.polarization_split) << "\n";
        } else if constexpr (std::is_same_v<T, CoherentSourceConfig>) {
          os << "beam1_rate_hz = " << fmt_real(s.beam1_rate_hz) << "\n";
          os << "beam2_rate_hz = " << fmt_real(s.beam2_rate_hz) << "\n";
        } else if constexpr (std::is_same_v<T, ThermalSourceConfig>) {
          os << "mean_rate_hz = " << fmt_real(s.mean_rate_hz) << "\n";
          os << "coherence_time_ps = " << fmt_real(s.coherence_time_ps) << "\n";
          os << "split_fraction = " << fmt_real(s.split_fraction) << "\n";
        } else {
          os << "herald_rate_hz = " << fmt_real(s.herald_rate_hz) << "\n";
          os << "per_gate_intensity_mean = " << fmt_real(s.per_gate_intensity_mean) << "\n";
          os << "split_fraction = " << fmt_real(s.split_fraction) << "\n";
          os << "intensity = "
             << (s.intensity_distribution == IntensityDistribution::Constant      ? "constant"
                 : s.intensity_distribution == IntensityDistribution::Exponential ? "exponential"
                                                                                  : "mixture")
             << "\n";
          os << "mixture_weight = " << fmt_real(s.mixture_weight) << "\n";
        }
      },
      cfg.source);
  if (md && !md->empty()) {
    os << "\n[source.metadata]\n";
    for (const auto& [k, v] : *md) os << k << " = " << quote(v) << "\n";
  }

  for (const DetectorConfig* d : {&cfg.d1, &cfg.d2, &cfg.trigger}) {
    os << "\n[" << detector_section(d->channel) << "]\n";
    os << "efficiency = " << fmt_real(d->efficiency) << "\n";
    os << "dark_rate_hz = " << fmt_real(d->dark_rate_hz) << "\n";
    os << "dead_time_ps = " << d->dead_time_ps << "\n";
    os << "jitter_sigma_ps = " << fmt_real(d->jitter_sigma_ps) << "\n";
  }
  if (!cfg.metadata.empty()) {
    os << "\n[metadata]\n";
    for (const auto& [k, v] : cfg.metadata) os << k << " = " << quote(v) << "\n";
  }
  return os.str();
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace coincsim
