#pragma once

// CSV tables and SVG line charts. Both are byte-stable for identical input.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nmcoh/error.hpp"

namespace nmcoh::io {

/// Shortest round-trip decimal form, or 12 significant digits when the
/// shortest form needs more.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string shortest(buf, res.ptr);
  int digits = 0;
  bool leading = true;
  for (char c : shortest) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++digits;
  }
  if (digits <= 12) return shortest;
  res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& c : t.comments) out += "#" + c + "\n";
  for (std::size_t j = 0; j < t.header.size(); ++j) out += (j ? "," : "") + t.header[j];
  out += "\n";
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (j) out += ",";
      out += format_number(t.columns[j][i]);
    }
    out += "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::Io, "write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

/// Parses a header line plus numeric rows. Malformed input raises Config.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    auto cells = split(line, ',');
    if (t.header.empty()) {
      for (auto& c : cells) require(!c.empty(), ErrorCode::Config, "empty column name in CSV header");
      require(cells.size() >= 2, ErrorCode::Config, "CSV needs at least two columns");
      t.header = cells;
      t.columns.assign(cells.size(), {});
      continue;
    }
    require(cells.size() == t.header.size(), ErrorCode::Config,
            "CSV line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) + " values");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto& c = cells[j];
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      require(!c.empty() && res.ec == std::errc{} && res.ptr == c.data() + c.size() && std::isfinite(v),
              ErrorCode::Config, "CSV line " + std::to_string(lineno) + ": bad value '" + c + "'");
      t.columns[j].push_back(v);
    }
  }
  require(!t.header.empty(), ErrorCode::Config, "CSV has no header");
  require(t.rows() >= 1, ErrorCode::Config, "CSV has no data rows");
  return t;
}

// ---------------------------------------------------------------- SVG

namespace detail {

inline std::string fixed(double v, int prec = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-14 ? 0.0 : v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/// 800x500 line chart: first column on x, every other column a polyline.
/// Comment lines of the table are carried into an XML comment.
inline std::string render_svg(const Table& t, const std::string& title = "") {
  require(t.columns.size() >= 2 && t.rows() >= 1, ErrorCode::Config, "nothing to plot");
  constexpr double W = 800, H = 500, left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  const auto& xs = t.columns[0];
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = 0.0, y1 = 0.0;
  bool first = true;
  for (std::size_t j = 1; j < t.columns.size(); ++j)
    for (double v : t.columns[j]) {
      if (first) y0 = y1 = v, first = false;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& c : t.comments) s += "<!-- #" + detail::escape(c) + " -->\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  if (!title.empty())
    s += "<text x=\"" + detail::fixed(left + pw / 2) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
         detail::escape(title) + "</text>\n";
  // Axes and ticks.
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(top + ph) + "\" x2=\"" + detail::fixed(left + pw) +
       "\" y2=\"" + detail::fixed(top + ph) + "\"/>\n";
  s += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(top) + "\" x2=\"" + detail::fixed(left) + "\" y2=\"" +
       detail::fixed(top + ph) + "\"/>\n";
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    s += "<line x1=\"" + detail::fixed(px(xv)) + "\" y1=\"" + detail::fixed(top + ph) + "\" x2=\"" + detail::fixed(px(xv)) +
         "\" y2=\"" + detail::fixed(top + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::fixed(px(xv)) + "\" y=\"" + detail::fixed(top + ph + 18) + "\" text-anchor=\"middle\">" +
         detail::tick_label(xv) + "</text>\n";
    s += "<line x1=\"" + detail::fixed(left - 5) + "\" y1=\"" + detail::fixed(py(yv)) + "\" x2=\"" + detail::fixed(left) +
         "\" y2=\"" + detail::fixed(py(yv)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::fixed(left - 8) + "\" y=\"" + detail::fixed(py(yv) + 4) + "\" text-anchor=\"end\">" +
         detail::tick_label(yv) + "</text>\n";
  }
  s += "<text x=\"" + detail::fixed(left + pw / 2) + "\" y=\"" + detail::fixed(H - 10) + "\" text-anchor=\"middle\">" +
       detail::escape(t.header[0]) + "</text>\n";
  s += "</g>\n";
  // Curves, thinned to at most ~2000 vertices each.
  const std::size_t n = t.rows();
  const std::size_t stride = std::max<std::size_t>(1, n / 2000);
  for (std::size_t j = 1; j < t.columns.size(); ++j) {
    const char* colour = detail::kPalette[(j - 1) % std::size(detail::kPalette)];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      if (i) s += " ";
      s += detail::fixed(px(xs[i])) + "," + detail::fixed(py(t.columns[j][i]));
    }
    if ((n - 1) % stride != 0) s += " " + detail::fixed(px(xs[n - 1])) + "," + detail::fixed(py(t.columns[j][n - 1]));
    s += "\"/>\n";
  }
  // Legend.
  s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t j = 1; j < t.columns.size(); ++j) {
    const double y = top + 10 + 20.0 * static_cast<double>(j - 1);
    const char* colour = detail::kPalette[(j - 1) % std::size(detail::kPalette)];
    s += "<line x1=\"" + detail::fixed(W - right + 15) + "\" y1=\"" + detail::fixed(y) + "\" x2=\"" + detail::fixed(W - right + 40) +
         "\" y2=\"" + detail::fixed(y) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + detail::fixed(W - right + 45) + "\" y=\"" + detail::fixed(y + 4) + "\">" + detail::escape(t.header[j]) +
         "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace nmcoh::io
