#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sirdiv {

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, static_cast<std::size_t>(p - buf));
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument(std::string(what) + ": bad number '" +
                                std::string(s) + "'");
  return v;
}

/// Labeled numeric table serialized as CSV with a '#'-prefixed metadata
/// header. The x column comes first and must be strictly increasing.
struct CurveTable {
  std::string title;
  std::string x_label;
  std::vector<std::string> series_labels;
  std::vector<std::pair<std::string, std::string>> params;  // metadata
  std::vector<std::pair<double, std::vector<double>>> rows;
};

namespace detail {

inline void validate_table(const CurveTable& t) {
  for (const auto& row : t.rows)
    if (row.second.size() != t.series_labels.size())
      throw std::invalid_argument(
          "CurveTable: row width does not match series labels");
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (!(t.rows[i].first > t.rows[i - 1].first))
      throw std::invalid_argument("CurveTable: x must be strictly increasing");
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline std::string to_csv(const CurveTable& t) {
  detail::validate_table(t);
  std::string out;
  out += "# title: " + t.title + "\n";
  out += "# x_label: " + t.x_label + "\n";
  for (const auto& [k, v] : t.params) out += "# param " + k + ": " + v + "\n";
  out += t.x_label;
  for (const auto& label : t.series_labels) out += "," + label;
  out += "\n";
  for (const auto& [x, values] : t.rows) {
    out += format_double(x);
    for (double v : values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

inline CurveTable parse_csv(std::string_view text) {
  CurveTable t;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const std::size_t colon = body.find(':');
      if (colon == std::string_view::npos)
        throw std::invalid_argument("CurveTable line " +
                                    std::to_string(line_no) +
                                    ": metadata needs 'key: value'");
      std::string_view key = body.substr(0, colon);
      std::string_view value = body.substr(colon + 1);
      while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
      if (key == "title") {
        t.title = std::string(value);
      } else if (key == "x_label") {
        t.x_label = std::string(value);
      } else if (key.starts_with("param ")) {
        t.params.emplace_back(std::string(key.substr(6)), std::string(value));
      } else {
        throw std::invalid_argument("CurveTable line " +
                                    std::to_string(line_no) +
                                    ": unknown metadata key");
      }
      continue;
    }
    const auto cells = detail::split_csv(line);
    if (!have_header) {
      if (cells.size() < 2)
        throw std::invalid_argument("CurveTable line " +
                                    std::to_string(line_no) +
                                    ": header needs at least two columns");
      for (std::size_t c = 1; c < cells.size(); ++c)
        t.series_labels.emplace_back(cells[c]);
      have_header = true;
      continue;
    }
    if (cells.size() != t.series_labels.size() + 1)
      throw std::invalid_argument("CurveTable line " + std::to_string(line_no) +
                                  ": expected " +
                                  std::to_string(t.series_labels.size() + 1) +
                                  " columns");
    std::vector<double> values;
    values.reserve(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c)
      values.push_back(parse_double(cells[c], "CurveTable"));
    t.rows.emplace_back(parse_double(cells[0], "CurveTable"),
                        std::move(values));
  }
  if (!have_header)
    throw std::invalid_argument("CurveTable: missing header row");
  detail::validate_table(t);
  return t;
}

}  // namespace sirdiv
