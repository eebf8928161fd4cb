#pragma once

#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "georand/stats/autocorrelation.hpp"
#include "georand/stats/diehard.hpp"

namespace georand::stats {

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace detail

/// One line: name, statistics, p-value(s), [parameters].
inline std::string format_report_line(const TestReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(18) << r.name;
  for (const auto& s : r.statistics) {
    os << ' ' << s.name << '=' << detail::format_number(s.value);
  }
  os << "  p=" << std::fixed << std::setprecision(4) << r.p_value;
  for (const auto& e : r.extra_p_values) {
    os << ' ' << e.name << "_p=" << std::fixed << std::setprecision(4) << e.value;
  }
  os.unsetf(std::ios::floatfield);
  if (!r.parameters.empty()) {
    os << "  [";
    for (std::size_t i = 0; i < r.parameters.size(); ++i) {
      if (i) os << ' ';
      os << r.parameters[i].name << '=' << detail::format_number(r.parameters[i].value);
    }
    os << ']';
  }
  return os.str();
}

/// Machine-readable block, `test.key=value` per line.
inline void write_key_values(std::ostream& os, std::span<const TestReport> reports) {
  os << std::setprecision(17);
  for (const auto& r : reports) {
    for (const auto& s : r.statistics) os << r.name << '.' << s.name << '=' << s.value << '\n';
    os << r.name << ".p_value=" << r.p_value << '\n';
    for (const auto& e : r.extra_p_values) {
      os << r.name << '.' << e.name << "_p_value=" << e.value << '\n';
    }
    for (const auto& p : r.parameters) os << r.name << '.' << p.name << '=' << p.value << '\n';
  }
}

inline void write_report(std::ostream& os, std::span<const TestReport> reports,
                         bool with_key_values = true) {
  for (const auto& r : reports) os << format_report_line(r) << '\n';
  if (with_key_values && !reports.empty()) {
    os << "\n[values]\n";
    write_key_values(os, reports);
  }
}

/// Two columns: lag, C(lag).
inline void write_curve(std::ostream& os, const CorrelationCurve& curve) {
  os << std::setprecision(17);
  for (std::size_t j = 0; j < curve.values.size(); ++j) {
    os << j << ' ' << curve.values[j] << '\n';
  }
}

/// Row-major matrix, one row of C(i, *) per line.
inline void write_matrix(std::ostream& os, const Correlation2D& c) {
  os << std::setprecision(9);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      if (j) os << ' ';
      os << c.at(i, j);
    }
    os << '\n';
  }
}

}  // namespace georand::stats
