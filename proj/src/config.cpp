#include "bispec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bispec {

std::string command_name(Command c) {
  switch (c) {
    case Command::constants: return "constants";
    case Command::smallness: return "smallness";
    case Command::spectrum: return "spectrum";
    case Command::resolvent_sweep: return "resolvent-sweep";
    case Command::identities: return "identities";
    case Command::full_report: return "full-report";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_double_or_throw(std::string_view s, int line,
                             const std::string& key) {
  const std::string str(trim(s));
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v))
    throw ConfigError("line " + std::to_string(line) + ", field '" + key +
                      "': not a finite number: '" + str + "'");
  return v;
}

}  // namespace

cplx parse_complex(std::string_view sv) {
  std::string s;
  for (char c : sv)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty complex literal");
  auto parse_real = [](const std::string& str) {
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size())
      throw ConfigError("bad complex literal component: '" + str + "'");
    return v;
  };
  if (s.back() != 'i' && s.back() != 'I') return {parse_real(s), 0.0};
  s.pop_back();  // pure or trailing imaginary part
  // Find the split between real and imaginary parts: the last +/- that is
  // not the leading sign and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') &&
        s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    if (s.empty() || s == "+" ) return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, parse_real(s)};
  }
  const std::string re = s.substr(0, split);
  std::string im = s.substr(split);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return {parse_real(re), parse_real(im)};
}

namespace {

struct RawEntry {
  std::string value;
  int line;
};

struct RawConfig {
  std::map<std::string, RawEntry> entries;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second.value;
  }

  int line_of(const std::string& key) const { return entries.at(key).line; }
};

const char* const kKnownKeys[] = {
    "command", "d", "n", "R", "seed", "out",
    "grid.n", "grid.R", "grid.r_doubling",
    "potential.kind", "potential.alpha", "potential.height",
    "potential.center", "potential.width", "potential.radius",
    "potential.file",
    "zgrid.points", "zgrid.rho_min", "zgrid.rho_max", "zgrid.nr",
    "zgrid.angles", "zgrid.delta",
    "tolerances.wrn_tol", "tolerances.dist_tol", "tolerances.drift_factor",
};

RawConfig tokenize(std::string_view text) {
  RawConfig raw;
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) +
                          ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    const bool known =
        std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                    [&](const char* k) { return key == k; });
    if (!known)
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (auto it = raw.entries.find(key); it != raw.entries.end())
      throw ConfigError("duplicate key '" + key + "' at lines " +
                        std::to_string(it->second.line) + " and " +
                        std::to_string(lineno));
    raw.entries.emplace(key, RawEntry{value, lineno});
  }
  return raw;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const RawConfig raw = tokenize(text);
  RunConfig cfg;

  auto need = [&](const char* key) -> std::string {
    auto v = raw.get(key);
    if (!v) throw ConfigError(std::string("missing required key '") + key + "'");
    return *v;
  };

  {
    const std::string c = need("command");
    if (c == "constants") cfg.command = Command::constants;
    else if (c == "smallness") cfg.command = Command::smallness;
    else if (c == "spectrum") cfg.command = Command::spectrum;
    else if (c == "resolvent-sweep") cfg.command = Command::resolvent_sweep;
    else if (c == "identities") cfg.command = Command::identities;
    else if (c == "full-report") cfg.command = Command::full_report;
    else
      throw ConfigError("line " + std::to_string(raw.line_of("command")) +
                        ": unknown command '" + c + "'");
  }

  {
    const int line = raw.has("d") ? raw.line_of("d") : 0;
    const double dv = parse_double_or_throw(need("d"), line, "d");
    if (dv != std::floor(dv))
      throw ConfigError("line " + std::to_string(line) + ": d must be an integer");
    if (dv <= 4)
      throw ConfigError("line " + std::to_string(line) +
                        ": requires d >= 5 (got " + std::to_string((int)dv) +
                        ")");
    cfg.d = static_cast<int>(dv);
  }

  auto get_int = [&](const char* key, int dflt, int minv) {
    auto v = raw.get(key);
    if (!v) return dflt;
    const int line = raw.line_of(key);
    const double x = parse_double_or_throw(*v, line, key);
    if (x != std::floor(x) || x < minv)
      throw ConfigError("line " + std::to_string(line) + ", field '" + key +
                        "': expected integer >= " + std::to_string(minv));
    return static_cast<int>(x);
  };
  auto get_double = [&](const char* key, double dflt, bool positive) {
    auto v = raw.get(key);
    if (!v) return dflt;
    const int line = raw.line_of(key);
    const double x = parse_double_or_throw(*v, line, key);
    if (positive && !(x > 0.0))
      throw ConfigError("line " + std::to_string(line) + ", field '" + key +
                        "': must be > 0");
    return x;
  };
  auto get_complex = [&](const char* key, cplx dflt) {
    auto v = raw.get(key);
    if (!v) return dflt;
    try {
      return parse_complex(*v);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(raw.line_of(key)) +
                        ", field '" + key + "': " + e.what());
    }
  };

  // n / R accepted both at top level and in [grid]
  if (raw.has("n") && raw.has("grid.n"))
    throw ConfigError("keys 'n' and 'grid.n' are aliases; lines " +
                      std::to_string(raw.line_of("n")) + " and " +
                      std::to_string(raw.line_of("grid.n")));
  if (raw.has("R") && raw.has("grid.R"))
    throw ConfigError("keys 'R' and 'grid.R' are aliases; lines " +
                      std::to_string(raw.line_of("R")) + " and " +
                      std::to_string(raw.line_of("grid.R")));
  cfg.n = get_int(raw.has("n") ? "n" : "grid.n", 1000, 8);
  cfg.R = get_double(raw.has("R") ? "R" : "grid.R", 10.0, true);
  {
    auto v = raw.get("grid.r_doubling");
    if (v) {
      if (*v == "true") cfg.r_doubling = true;
      else if (*v == "false") cfg.r_doubling = false;
      else
        throw ConfigError("line " + std::to_string(raw.line_of("grid.r_doubling")) +
                          ": expected true or false");
    }
  }
  cfg.seed = static_cast<unsigned>(get_int("seed", 42, 0));
  if (auto v = raw.get("out")) cfg.out_dir = *v;

  // potential
  if (auto v = raw.get("potential.kind")) {
    static const char* kinds[] = {"none", "rellich", "bump", "step", "sampled"};
    if (std::none_of(std::begin(kinds), std::end(kinds),
                     [&](const char* k) { return *v == k; }))
      throw ConfigError("line " + std::to_string(raw.line_of("potential.kind")) +
                        ": unknown potential kind '" + *v + "'");
    cfg.potential.kind = *v;
  }
  cfg.potential.alpha = get_complex("potential.alpha", cfg.potential.alpha);
  cfg.potential.height = get_complex("potential.height", cfg.potential.height);
  cfg.potential.center = get_double("potential.center", cfg.potential.center, false);
  cfg.potential.width = get_double("potential.width", cfg.potential.width, true);
  cfg.potential.radius = get_double("potential.radius", cfg.potential.radius, true);
  if (auto v = raw.get("potential.file")) cfg.potential.file = *v;
  if (cfg.potential.kind == "sampled" && cfg.potential.file.empty())
    throw ConfigError("potential.kind = sampled requires potential.file");

  // z grid
  cfg.delta = get_double("zgrid.delta", 1.0, true);
  const bool has_points = raw.has("zgrid.points");
  const bool has_polar = raw.has("zgrid.rho_min") || raw.has("zgrid.rho_max") ||
                         raw.has("zgrid.nr") || raw.has("zgrid.angles");
  if (has_points && has_polar)
    throw ConfigError("zgrid.points and the log-polar keys are exclusive");
  if (has_points) {
    const std::string pts = *raw.get("zgrid.points");
    std::stringstream ss{pts};
    std::string tok;
    while (std::getline(ss, tok, ';')) {
      const std::string t(trim(tok));
      if (t.empty()) continue;
      try {
        cfg.z_points.push_back(parse_complex(t));
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(raw.line_of("zgrid.points")) +
                          ": " + e.what());
      }
    }
    if (cfg.z_points.empty())
      throw ConfigError("zgrid.points: no points parsed");
  } else {
    const double rmin = get_double("zgrid.rho_min", 0.01, true);
    const double rmax = get_double("zgrid.rho_max", 100.0, true);
    const int nr = get_int("zgrid.nr", 25, 2);
    if (!(rmax > rmin))
      throw ConfigError("zgrid.rho_max must exceed zgrid.rho_min");
    std::vector<double> angles = {M_PI / 4, 3 * M_PI / 4, -3 * M_PI / 4,
                                  -M_PI / 4};
    if (auto v = raw.get("zgrid.angles")) {
      angles.clear();
      std::stringstream ss{*v};
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        angles.push_back(parse_double_or_throw(
            tok, raw.line_of("zgrid.angles"), "zgrid.angles"));
      }
      if (angles.empty())
        throw ConfigError("zgrid.angles: no angles parsed");
    }
    const double ratio = rmax / rmin;
    for (double th : angles)
      for (int i = 0; i < nr; ++i)
        cfg.z_points.push_back(std::polar(
            rmin * std::pow(ratio, static_cast<double>(i) / (nr - 1)), th));
  }

  cfg.wrn_tol = get_double("tolerances.wrn_tol", 1e-6, true);
  cfg.dist_tol = get_double("tolerances.dist_tol", 1e-3, true);
  cfg.drift_factor = get_double("tolerances.drift_factor", 1.5, true);
  return cfg;
}

Potential build_potential(const PotentialSpec& spec, GridPtr grid) {
  if (spec.kind == "none") return Potential::zero();
  if (spec.kind == "rellich") return Potential::rellich(spec.alpha);
  if (spec.kind == "bump")
    return Potential::bump(spec.height, spec.center, spec.width);
  if (spec.kind == "step") return Potential::step(spec.height, spec.radius);
  if (spec.kind == "sampled") {
    std::ifstream in(spec.file);
    if (!in) throw IoError("cannot open sampled potential file: " + spec.file);
    std::vector<cplx> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t(trim(line));
      if (t.empty() || t[0] == '#') continue;
      try {
        values.push_back(parse_complex(t));
      } catch (const ConfigError& e) {
        throw ConfigError(spec.file + ":" + std::to_string(lineno) + ": " +
                          e.what());
      }
    }
    if (static_cast<int>(values.size()) != grid->n())
      throw ConfigError("sampled potential has " +
                        std::to_string(values.size()) + " values, grid has " +
                        std::to_string(grid->n()) + " nodes");
    return Potential::sampled(std::move(values), grid);
  }
  throw ConfigError("unknown potential kind: " + spec.kind);
}

}  // namespace bispec
