// Run artifacts: JSON reports, CSV series, and PVIGRID1 field snapshots.
// All numeric text uses 17 significant digits and '.' as the decimal mark,
// so a rerun with the same scenario and seed reproduces every byte.
//
// PVIGRID1 layout (text, LF newlines):
//   PVIGRID1
//   n1=<int> n2=<int>
//   L1=<float> period=<float>
//   components=<C> names=<a,b,c>
//   <n1*n2 data lines, j-major then i, C values per line>
#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pvi/grid.hpp"
#include "pvi/scenario.hpp"
#include "pvi/version.hpp"

namespace pvi {

inline std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string csv_string(const std::vector<std::string>& header,
                              const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw shape_mismatch("csv_string: row width != header width");
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += g17(row[k]);
    }
    out += '\n';
  }
  return out;
}

template <int C>
std::string pvigrid_string(const field2d<C>& f,
                           const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != C)
    throw shape_mismatch("pvigrid_string: one name per component required");
  std::string out = "PVIGRID1\n";
  out += "n1=" + std::to_string(f.g.n1) + " n2=" + std::to_string(f.g.n2) + "\n";
  out += "L1=" + g17(f.g.L1) + " period=" + g17(f.g.period) + "\n";
  out += "components=" + std::to_string(C) + " names=";
  for (int c = 0; c < C; ++c) {
    if (c) out += ',';
    out += names[c];
  }
  out += '\n';
  for (int j = 0; j < f.g.n2; ++j)
    for (int i = 0; i < f.g.n1; ++i) {
      const auto col = f.col(i, j);
      for (int c = 0; c < C; ++c) {
        if (c) out += ' ';
        out += g17(col(c));
      }
      out += '\n';
    }
  return out;
}

struct grid_snapshot {
  grid2d g;
  std::vector<std::string> names;
  Eigen::MatrixXd a;  // one column per node, grid2d::id ordering
};

inline grid_snapshot parse_pvigrid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto need = [&](const char* what) {
    if (!std::getline(in, line))
      throw parse_error(std::string("pvigrid: missing ") + what);
    return line;
  };
  if (need("magic") != "PVIGRID1") throw parse_error("pvigrid: bad magic line");

  int n1 = 0, n2 = 0, comps = 0;
  double L1 = 0.0, period = 0.0;
  if (std::sscanf(need("grid size").c_str(), "n1=%d n2=%d", &n1, &n2) != 2)
    throw parse_error("pvigrid: bad grid size line");
  if (std::sscanf(need("extents").c_str(), "L1=%lf period=%lf", &L1, &period) !=
      2)
    throw parse_error("pvigrid: bad extents line");
  std::string head = need("components");
  char name_buf[512] = {0};
  if (std::sscanf(head.c_str(), "components=%d names=%511s", &comps,
                  name_buf) != 2 ||
      comps < 1)
    throw parse_error("pvigrid: bad components line");

  grid_snapshot out;
  out.g = grid2d(n1, n2, L1, period);
  std::string names(name_buf);
  for (size_t pos = 0; pos <= names.size();) {
    size_t comma = names.find(',', pos);
    out.names.push_back(names.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(out.names.size()) != comps)
    throw parse_error("pvigrid: name count != components");

  out.a.resize(comps, out.g.nodes());
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      need("data row");
      std::istringstream row(line);
      for (int c = 0; c < comps; ++c)
        if (!(row >> out.a(c, out.g.id(i, j))))
          throw parse_error("pvigrid: short data row");
    }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw validation_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& p,
                            const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw validation_error("cannot write " + p.string());
  out << content;
}

// Common envelope every report embeds: software version, scenario hash,
// grid spec.
inline nlohmann::json report_base(const scenario& sc) {
  nlohmann::json j;
  j["version"] = version_string;
  j["scenario_hash"] = hash_hex(sc.hash);
  j["grid"] = {{"n1", sc.n1}, {"n2", sc.n2}, {"d", sc.d}};
  if (sc.seed) j["seed"] = *sc.seed;
  return j;
}

}  // namespace pvi
