#pragma once

// Flat CSV input/output. Floats are written in shortest round-trip form, so a
// value read back with from_chars is bit-identical to the one written.

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "regime_eq/errors.hpp"
#include "regime_eq/model.hpp"
#include "regime_eq/odes.hpp"

namespace regime_eq::csv {

inline std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Writes one row; strings are emitted verbatim.
class RowWriter {
 public:
  explicit RowWriter(std::ostream& os) : os_(os) {}
  RowWriter& operator<<(double v) { return field(format(v)); }
  RowWriter& operator<<(std::string_view s) { return field(s); }
  RowWriter& operator<<(std::size_t v) { return field(std::to_string(v)); }
  RowWriter& operator<<(int v) { return field(std::to_string(v)); }
  void end() {
    os_ << '\n';
    first_ = true;
  }

 private:
  RowWriter& field(std::string_view s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  std::ostream& os_;
  bool first_ = true;
};

inline constexpr std::string_view kGSolutionHeader = "t,g11,g21,g12,g22,dg11,dg21,dg12,dg22";

inline void write_g_solution(std::ostream& os, const GSolution& sol) {
  os << kGSolutionHeader << '\n';
  RowWriter row(os);
  const auto grid = sol.grid();
  for (std::size_t m = 0; m < grid.size(); ++m) {
    row << grid[m];
    for (double v : sol.values()[m]) row << v;
    for (double v : sol.derivs()[m]) row << v;
    row.end();
  }
}

/// Rebuilds a GSolution from its CSV; the model must be supplied separately.
inline GSolution read_g_solution(std::istream& is, const Model& model, double tolerance) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty g-solution file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kGSolutionHeader) throw InvalidArgument("unexpected g-solution header: " + line);
  std::vector<double> grid;
  std::vector<GState> values, derivs;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != 9) throw InvalidArgument("g-solution rows need 9 columns");
    grid.push_back(parse_double(fields[0]));
    GState g{}, d{};
    for (std::size_t k = 0; k < 4; ++k) {
      g[k] = parse_double(fields[1 + k]);
      d[k] = parse_double(fields[5 + k]);
    }
    values.push_back(g);
    derivs.push_back(d);
  }
  Model m = model;
  if (!grid.empty()) m.horizon = grid.back();
  SolveStats stats;
  for (const auto& g : values)
    for (double v : g) stats.min_g = std::min(stats.min_g, v);
  return GSolution(m, HermiteTrajectory(std::move(grid), std::move(values), std::move(derivs)),
                   tolerance, stats);
}

}  // namespace regime_eq::csv
