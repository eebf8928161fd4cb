#pragma once

// Text formats shared by the generators and the command-line tool:
//   sequence file  one line of ASCII '0'/'1', newline terminated
//   sidecar        key=value lines (mode, seed, n, bounds, hull_k)

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "georand/bitgen.hpp"
#include "georand/error.hpp"
#include "georand/geometry.hpp"

namespace georand {

inline void write_sequence(std::ostream& os, const BitSequence& seq) {
  os << seq.to_string() << '\n';
}

inline std::vector<std::uint8_t> parse_sequence(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::uint8_t> bits;
  bits.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c != '0' && c != '1') {
      std::ostringstream msg;
      msg << "sequence file: unexpected character at column " << i + 1;
      throw Error(ErrorCode::bad_header, msg.str());
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  std::string rest;
  while (std::getline(is, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw Error(ErrorCode::bad_header,
                  "sequence file: expected a single line of bits");
    }
  }
  if (bits.empty()) {
    throw Error(ErrorCode::invalid_argument, "sequence file: no bits");
  }
  return bits;
}

inline std::string format_bounds(const Rect& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.xmin() << ',' << r.ymin() << ',' << r.xmax() << ',' << r.ymax();
  return os.str();
}

inline Rect parse_bounds(const std::string& text) {
  std::istringstream is(text);
  double v[4];
  for (int i = 0; i < 4; ++i) {
    if (!(is >> v[i])) {
      throw Error(ErrorCode::invalid_argument,
                  "bounds must be x0,y0,x1,y1, got '" + text + "'");
    }
    if (i < 3) {
      char comma = 0;
      if (!(is >> comma) || comma != ',') {
        throw Error(ErrorCode::invalid_argument,
                    "bounds must be x0,y0,x1,y1, got '" + text + "'");
      }
    }
  }
  is >> std::ws;
  if (!is.eof()) {
    throw Error(ErrorCode::invalid_argument,
                "trailing characters in bounds '" + text + "'");
  }
  return Rect(v[0], v[1], v[2], v[3]);
}

inline void write_sidecar(std::ostream& os, const Provenance& prov,
                          const std::optional<Rect>& bounds) {
  os << "mode=" << to_string(prov.mode) << '\n';
  if (prov.seed) os << "seed=" << *prov.seed << '\n';
  if (prov.n_points) os << "n=" << *prov.n_points << '\n';
  if (bounds) os << "bounds=" << format_bounds(*bounds) << '\n';
  if (prov.hull_size) os << "hull_k=" << *prov.hull_size << '\n';
}

inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::bad_header, "expected key=value, got '" + line + "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

inline Provenance provenance_from(const std::map<std::string, std::string>& kv) {
  Provenance prov;
  if (auto it = kv.find("mode"); it != kv.end()) prov.mode = parse_mode(it->second);
  if (auto it = kv.find("seed"); it != kv.end()) prov.seed = std::stoull(it->second);
  if (auto it = kv.find("n"); it != kv.end()) prov.n_points = std::stoull(it->second);
  if (auto it = kv.find("hull_k"); it != kv.end()) {
    prov.hull_size = std::stoull(it->second);
  }
  return prov;
}

}  // namespace georand
