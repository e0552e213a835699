// Scenario files: TOML-style text (sections, key = value, # comments)
// describing a complete run. parse_scenario fills documented defaults and
// rejects unknown keys, unknown sections, and out-of-range values; every
// diagnostic names the offending key.
//
// Recognized keys (defaults in parentheses):
//   d (2), eps (1.0)
//   [eos]       gamma (5/3)
//   [ring]      recipe ("graded" | "drift"), seed (unset), q0 (derived),
//               qa (0.3), va (0.2), vb (0.1), vb0 (0.0 / 0.15 for drift),
//               hb (1.0), e0 (0.0), S0 (0.0)
//   [grid]      n1 (33), n2 (32)
//   [run]       T (0.1), cfl (0.4), m (1)
//   [criteria]  delta (1e-8), delta0 (1e-6)
//   [forcing]   recipe ("none" | "bump_drive"), amp (1e-3)
//   [stability] v, H, h, N (3-vectors), e1 (0.0)
//
// q0 defaults to (hb^2 - e0^2)/2 so the ring jump condition holds; setting
// it explicitly to something else is rejected by ring2d::validate.
#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pvi/error.hpp"
#include "pvi/ring_state.hpp"

namespace pvi {

struct stability_sample {
  vec<3> v = vec<3>::Zero();
  vec<3> H = (vec<3>() << 0.0, 1.0, 0.0).finished();
  vec<3> h = (vec<3>() << 0.0, 0.0, 1.0).finished();
  vec<3> N = (vec<3>() << 1.0, 0.0, 0.0).finished();
  double e1 = 0.0;
};

struct scenario {
  int d = 2;
  double eps = 1.0;
  double gamma = 5.0 / 3.0;

  std::string recipe = "graded";
  std::optional<uint64_t> seed;
  ring2d ring;  // materialized background, valid when d == 2

  int n1 = 33, n2 = 32;
  double T = 0.1, cfl = 0.4;
  int m = 1;
  double delta = 1e-8, delta0 = 1e-6;

  std::string forcing_recipe = "none";
  double forcing_amp = 1e-3;

  stability_sample stab;

  std::string text;   // raw file contents
  uint64_t hash = 0;  // fnv1a64 of text
};

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct raw_value {
  std::string text;
  int line = 0;
};

struct raw_scenario {
  std::map<std::string, raw_value> kv;

  std::optional<raw_value> take(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    raw_value v = it->second;
    kv.erase(it);
    return v;
  }
};

inline bool known_section(const std::string& s) {
  static const char* names[] = {"eos",      "ring",    "grid",     "run",
                                "criteria", "forcing", "stability"};
  for (const char* n : names)
    if (s == n) return true;
  return false;
}

inline raw_scenario tokenize_scenario(const std::string& text) {
  raw_scenario out;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw parse_error("line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section))
        throw validation_error("[" + section + "]: unknown section");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw parse_error("line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string full = section.empty() ? key : section + "." + key;
    if (out.kv.count(full))
      throw parse_error("line " + std::to_string(line_no) + ": duplicate key " +
                        full);
    out.kv[full] = raw_value{val, line_no};
  }
  return out;
}

inline double to_number(const std::string& key, const raw_value& v) {
  const char* s = v.text.c_str();
  char* end = nullptr;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw validation_error(key + ": expected a number, got '" + v.text + "'");
  return x;
}

inline int to_integer(const std::string& key, const raw_value& v) {
  double x = to_number(key, v);
  int n = static_cast<int>(x);
  if (static_cast<double>(n) != x)
    throw validation_error(key + ": expected an integer, got '" + v.text +
                           "'");
  return n;
}

inline uint64_t to_seed(const std::string& key, const raw_value& v) {
  const char* s = v.text.c_str();
  char* end = nullptr;
  unsigned long long x = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v.text.front() == '-')
    throw validation_error(key + ": expected an unsigned integer, got '" +
                           v.text + "'");
  return static_cast<uint64_t>(x);
}

inline std::string to_word(const std::string& key, const raw_value& v) {
  std::string t = v.text;
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
    t = t.substr(1, t.size() - 2);
  if (t.empty() || t.find('"') != std::string::npos)
    throw validation_error(key + ": expected a name, got '" + v.text + "'");
  return t;
}

inline vec<3> to_vec3(const std::string& key, const raw_value& v) {
  std::string t = v.text;
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw validation_error(key + ": expected [x, y, z], got '" + v.text + "'");
  t = t.substr(1, t.size() - 2);
  vec<3> out;
  size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    size_t comma = t.find(',', pos);
    std::string part =
        trim(comma == std::string::npos ? t.substr(pos) : t.substr(pos, comma - pos));
    if (part.empty() || (k < 2) != (comma != std::string::npos))
      throw validation_error(key + ": expected [x, y, z], got '" + v.text +
                             "'");
    out(k) = to_number(key, raw_value{part, v.line});
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

inline scenario parse_scenario(const std::string& text) {
  using namespace detail;
  raw_scenario raw = tokenize_scenario(text);
  scenario sc;
  sc.text = text;
  sc.hash = fnv1a64(text);

  auto num = [&](const char* key, double& slot) {
    if (auto v = raw.take(key)) slot = to_number(key, *v);
  };
  auto integer = [&](const char* key, int& slot) {
    if (auto v = raw.take(key)) slot = to_integer(key, *v);
  };
  auto word = [&](const char* key, std::string& slot) {
    if (auto v = raw.take(key)) slot = to_word(key, *v);
  };
  auto vec3 = [&](const char* key, vec<3>& slot) {
    if (auto v = raw.take(key)) slot = to_vec3(key, *v);
  };

  integer("d", sc.d);
  if (sc.d != 2 && sc.d != 3) throw validation_error("d must be 2 or 3");
  num("eps", sc.eps);
  if (!(sc.eps > 0.0)) throw validation_error("eps must be > 0");

  num("eos.gamma", sc.gamma);
  if (!(sc.gamma > 1.0)) throw validation_error("eos.gamma must be > 1");

  word("ring.recipe", sc.recipe);
  if (sc.recipe != "graded" && sc.recipe != "drift")
    throw validation_error("ring.recipe: unknown recipe '" + sc.recipe + "'");
  if (auto v = raw.take("ring.seed")) sc.seed = to_seed("ring.seed", *v);

  sc.ring.gas = eos(sc.gamma);
  sc.ring.eps = sc.eps;
  if (sc.recipe == "drift") sc.ring.vb0 = 0.15;
  num("ring.qa", sc.ring.qa);
  num("ring.va", sc.ring.va);
  num("ring.vb", sc.ring.vb);
  num("ring.vb0", sc.ring.vb0);
  num("ring.hb", sc.ring.hb);
  num("ring.e0", sc.ring.e0);
  num("ring.S0", sc.ring.S0);
  sc.ring.q0 = 0.5 * (sc.ring.hb * sc.ring.hb - sc.ring.e0 * sc.ring.e0);
  num("ring.q0", sc.ring.q0);

  integer("grid.n1", sc.n1);
  if (sc.n1 < 5) throw validation_error("grid.n1 must be >= 5");
  integer("grid.n2", sc.n2);
  if (sc.n2 < 4) throw validation_error("grid.n2 must be >= 4");

  num("run.T", sc.T);
  if (!(sc.T > 0.0)) throw validation_error("run.T must be > 0");
  num("run.cfl", sc.cfl);
  if (!(sc.cfl > 0.0 && sc.cfl <= 1.0))
    throw validation_error("run.cfl must lie in (0, 1]");
  integer("run.m", sc.m);
  if (sc.m < 0 || sc.m > 2) throw validation_error("run.m must be 0, 1 or 2");

  num("criteria.delta", sc.delta);
  if (!(sc.delta > 0.0)) throw validation_error("criteria.delta must be > 0");
  num("criteria.delta0", sc.delta0);
  if (!(sc.delta0 >= 0.0))
    throw validation_error("criteria.delta0 must be >= 0");

  word("forcing.recipe", sc.forcing_recipe);
  if (sc.forcing_recipe != "none" && sc.forcing_recipe != "bump_drive")
    throw validation_error("forcing.recipe: unknown recipe '" +
                           sc.forcing_recipe + "'");
  num("forcing.amp", sc.forcing_amp);

  vec3("stability.v", sc.stab.v);
  vec3("stability.H", sc.stab.H);
  vec3("stability.h", sc.stab.h);
  vec3("stability.N", sc.stab.N);
  num("stability.e1", sc.stab.e1);

  if (!raw.kv.empty())
    throw validation_error(raw.kv.begin()->first + ": unknown key");

  if (sc.d == 2) {
    try {
      sc.ring.validate();
    } catch (const error& e) {
      throw validation_error("ring: " + std::string(e.what()));
    }
  }
  return sc;
}

}  // namespace pvi
