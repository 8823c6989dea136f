#include "wgqed/cli/config_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace wgqed::cli {
namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::map<std::string, Entry> entries;
  std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

const std::set<std::string>& keys_for(const std::string& section) {
  static const std::set<std::string> photon{"k", "v_g", "shape", "tau", "x0"};
  static const std::set<std::string> emitter{"V", "delta", "gamma", "d", "phase", "spacing_phase"};
  static const std::set<std::string> grid{"t_start",      "t_end",       "t_points",  "k_points",
                                          "k_half_width", "k_doublings", "k_tolerance", "threshold"};
  if (section == "photon") return photon;
  if (section == "grid") return grid;
  return emitter;
}

class Resolver {
 public:
  Resolver(const Section& section, double rate_unit) : section_(section), rate_unit_(rate_unit) {}

  std::optional<double> get(const std::string& key, UnitKind kind) const {
    auto it = section_.entries.find(key);
    if (it == section_.entries.end()) return std::nullopt;
    try {
      return parse_quantity(it->second.value, kind, rate_unit_);
    } catch (const std::exception& e) {
      throw ConfigParseError(it->second.line, key + ": " + e.what());
    }
  }

  double require(const std::string& key, UnitKind kind, const std::string& where) const {
    if (auto v = get(key, kind)) return *v;
    throw ConfigParseError(section_.line, "[" + where + "] is missing '" + key + "'");
  }

  std::optional<std::size_t> count(const std::string& key) const {
    auto v = get(key, UnitKind::Plain);
    if (!v) return std::nullopt;
    if (*v < 1.0 || *v != static_cast<double>(static_cast<std::size_t>(*v)))
      throw ConfigParseError(section_.entries.at(key).line, key + " must be a positive integer");
    return static_cast<std::size_t>(*v);
  }

  const Entry* raw(const std::string& key) const {
    auto it = section_.entries.find(key);
    return it == section_.entries.end() ? nullptr : &it->second;
  }

 private:
  const Section& section_;
  double rate_unit_;
};

}  // namespace

ConfigParseError::ConfigParseError(std::size_t line, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

double parse_quantity(std::string_view text, UnitKind kind, double rate_unit) {
  text = trim(text);
  constexpr std::string_view per = "/Gwg";
  constexpr std::string_view times = "Gwg";
  if (text.size() >= per.size() && text.substr(text.size() - per.size()) == per) {
    if (kind != UnitKind::Time) throw std::invalid_argument("'/Gwg' only applies to times");
    if (!(rate_unit > 0.0)) throw std::invalid_argument("Gwg unit needs V > 0 on emitter 1");
    return parse_number(text.substr(0, text.size() - per.size())) / rate_unit;
  }
  if (text.size() >= times.size() && text.substr(text.size() - times.size()) == times) {
    if (kind != UnitKind::Rate) throw std::invalid_argument("'Gwg' only applies to rates");
    if (!(rate_unit > 0.0)) throw std::invalid_argument("Gwg unit needs V > 0 on emitter 1");
    return parse_number(text.substr(0, text.size() - times.size())) * rate_unit;
  }
  return parse_number(text);
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = raw_line;
    if (auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigParseError(line_no, "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      const bool known = current == "photon" || current == "grid" ||
                         (current.rfind("emitter.", 0) == 0 && current.size() > 8 &&
                          current.find_first_not_of("0123456789", 8) == std::string::npos);
      if (!known) throw ConfigParseError(line_no, "unknown section [" + current + "]");
      if (sections.count(current)) throw ConfigParseError(line_no, "duplicate section [" + current + "]");
      sections[current].line = line_no;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError(line_no, "expected 'key = value'");
    if (current.empty()) throw ConfigParseError(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!keys_for(current).count(key)) throw UnknownKey(line_no, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty()) throw ConfigParseError(line_no, "empty value for '" + key + "'");
    auto& entries = sections[current].entries;
    if (entries.count(key)) throw ConfigParseError(line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }

  if (!sections.count("photon")) throw MissingSection(0, "missing section [photon]");
  std::size_t emitter_count = 0;
  while (sections.count("emitter." + std::to_string(emitter_count + 1))) ++emitter_count;
  if (emitter_count == 0) throw MissingSection(0, "missing section [emitter.1]");
  for (const auto& [name, section] : sections) {
    if (name.rfind("emitter.", 0) != 0) continue;
    const auto index = std::stoul(name.substr(8));
    if (index == 0 || index > emitter_count)
      throw ConfigParseError(section.line, "emitter sections must be numbered 1.." + std::to_string(emitter_count));
  }

  RunConfig run;
  const Section none{};
  const Section& photon_sec = sections.at("photon");
  const Section& grid_sec = sections.count("grid") ? sections.at("grid") : none;

  // Pass 1: plain quantities that fix the rate unit.
  const Resolver plain_photon(photon_sec, 0.0);
  run.chain.wavenumber = plain_photon.require("k", UnitKind::Plain, "photon");
  run.chain.group_velocity = plain_photon.get("v_g", UnitKind::Plain).value_or(1.0);
  const Resolver plain_first(sections.at("emitter.1"), 0.0);
  const double v1 = plain_first.require("V", UnitKind::Plain, "emitter.1");
  run.rate_unit = 2.0 * v1 * v1 / run.chain.group_velocity;

  const double k = run.chain.wavenumber;
  for (std::size_t j = 1; j <= emitter_count; ++j) {
    const std::string name = "emitter." + std::to_string(j);
    const Resolver r(sections.at(name), run.rate_unit);
    EmitterParams e;
    e.coupling = r.require("V", UnitKind::Plain, name);
    e.detuning = r.get("delta", UnitKind::Rate).value_or(0.0);
    e.dissipation = r.get("gamma", UnitKind::Rate).value_or(0.0);

    int forms = 0;
    for (const char* key : {"d", "phase", "spacing_phase"}) forms += r.raw(key) != nullptr;
    if (forms > 1)
      throw ConfigParseError(sections.at(name).line, "[" + name + "] gives more than one of d, phase, spacing_phase");
    if (auto d = r.get("d", UnitKind::Plain)) {
      e.position = *d;
    } else if (auto phase = r.get("phase", UnitKind::Plain)) {
      e.position = position_from_phase(*phase, k);
    } else if (auto spacing = r.get("spacing_phase", UnitKind::Plain)) {
      if (j == 1) throw ConfigParseError(r.raw("spacing_phase")->line, "emitter 1 has no predecessor for spacing_phase");
      e.position = run.chain.emitters.back().position + position_from_phase(*spacing, k);
    } else if (j == 1) {
      e.position = 0.0;
    } else {
      throw ConfigParseError(sections.at(name).line, "[" + name + "] needs one of d, phase, spacing_phase");
    }
    run.chain.emitters.push_back(e);
  }

  const Resolver photon(photon_sec, run.rate_unit);
  run.waveform.carrier = k;
  if (const Entry* shape = photon.raw("shape")) {
    if (shape->value == "decay")
      run.waveform.shape = PulseShape::ExponentialDecay;
    else if (shape->value == "growth")
      run.waveform.shape = PulseShape::ExponentialGrowth;
    else
      throw ConfigParseError(shape->line, "shape must be 'decay' or 'growth'");
  }
  if (auto tau = photon.get("tau", UnitKind::Time)) {
    run.waveform.time_constant = *tau;
  } else {
    if (!(run.rate_unit > 0.0)) throw ConfigParseError(photon_sec.line, "[photon] needs tau when V_1 = 0");
    run.waveform.time_constant = 1.0 / (3.0 * run.rate_unit);
  }
  run.waveform.front_position = photon.get("x0", UnitKind::Plain)
                                    .value_or(run.chain.emitters.front().position - position_from_phase(1.0, k));

  const Resolver grid(grid_sec, run.rate_unit);
  run.grid.t_start = grid.get("t_start", UnitKind::Time);
  run.grid.t_end = grid.get("t_end", UnitKind::Time);
  if (auto n = grid.count("t_points")) run.grid.t_points = *n;
  if (auto n = grid.count("k_points")) run.grid.quadrature.points = *n;
  if (auto w = grid.get("k_half_width", UnitKind::Plain)) run.grid.quadrature.half_width = *w;
  if (auto n = grid.get("k_doublings", UnitKind::Plain)) run.grid.quadrature.max_doublings = static_cast<int>(*n);
  if (auto tol = grid.get("k_tolerance", UnitKind::Plain)) run.grid.quadrature.tolerance = *tol;
  if (auto th = grid.get("threshold", UnitKind::Plain)) run.grid.threshold = *th;
  if (run.grid.t_points < 2) throw ConfigParseError(grid_sec.line, "t_points must be at least 2");

  if (auto fault = validate(run.chain))
    throw ConfigParseError(0, "invalid chain: " + std::string(to_string(*fault)));
  return run;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError(0, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace wgqed::cli
