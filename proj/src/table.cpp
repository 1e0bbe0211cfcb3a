#include "qbm/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace qbm {

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw DimensionMismatch("row of width " + std::to_string(row.size()) + " for " + std::to_string(columns.size()) +
                            " columns");
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column_index(std::string_view column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw DomainError("no column " + std::string(column));
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> ResultTable::column(std::string_view column) const {
  const auto j = column_index(column);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string to_csv(const ResultTable& t, std::string_view timestamp) {
  std::string out;
  out += "# table=" + t.name + "\n";
  out += "# config_hash=" + t.config_hash + "\n";
  out += "# version=" + t.version + "\n";
  if (!timestamp.empty()) out += "# generated=" + std::string(timestamp) + "\n";
  for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) out += (j ? "," : "") + format_number(r[j]);
    out += "\n";
  }
  return out;
}

ResultTable parse_csv(std::string_view text) {
  ResultTable t;
  bool header = false;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto kv = line.substr(1);
      while (!kv.empty() && kv.front() == ' ') kv.remove_prefix(1);
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "table") t.name = value;
      if (key == "config_hash") t.config_hash = value;
      if (key == "version") t.version = value;
      continue;
    }
    if (!header) {
      for (auto c : split(line, ',')) t.columns.emplace_back(c);
      header = true;
      continue;
    }
    std::vector<double> row;
    for (auto cell : split(line, ',')) {
      const std::string s(cell);
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) throw IoError("malformed CSV cell '" + s + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) throw IoError("CSV row width does not match header");
    t.rows.push_back(std::move(row));
  }
  if (!header) throw IoError("CSV has no header row");
  return t;
}

std::string csv_payload(std::string_view csv_text) {
  std::string out;
  for (auto line : split(csv_text, '\n')) {
    if (line.empty() || line.front() == '#') continue;
    out += line;
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

void emit_csv(const ResultTable& table, const std::string& path, std::string_view timestamp) {
  write_file(path, to_csv(table, timestamp));
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string to_svg(const ResultTable& table, const PlotSpec& spec) {
  const auto xs = table.column(spec.x);
  std::vector<std::string> ys = spec.y;
  if (ys.empty())
    for (const auto& c : table.columns)
      if (c != spec.x) ys.push_back(c);

  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0.0); };
  auto ymap = [&](double y) { return spec.log_y ? std::log10(y) : y; };

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (double x : xs)
    if (std::isfinite(x)) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
  for (const auto& name : ys)
    for (double y : table.column(name))
      if (usable(y)) ymin = std::min(ymin, ymap(y)), ymax = std::max(ymax, ymap(y));
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;

  const double W = spec.width, H = spec.height;
  const double left = 80, right = 200, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ymap(y) - ymin) / (ymax - ymin)) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
    << escape_xml(spec.title.empty() ? table.name : spec.title) << "</text>\n";
  s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double yv = spec.log_y ? std::pow(10.0, fy) : fy;
    const double gy = top + (1.0 - i / 4.0) * ph;
    s << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(top + ph + 18)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    s << "<text x=\"" << num(left - 6) << "\" y=\"" << num(gy + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    s << "<line x1=\"" << num(left) << "\" y1=\"" << num(gy) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(gy)
      << "\" stroke=\"#dddddd\"/>\n";
  }
  s << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 10)
    << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << escape_xml(spec.x) << "</text>\n";

  struct Series {
    std::string label;
    std::vector<std::size_t> rows;
    std::vector<double> y;
  };
  std::vector<Series> series;
  std::vector<double> groups;
  std::vector<double> gv;
  if (!spec.group.empty()) {
    gv = table.column(spec.group);
    for (double g : gv)
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }
  for (const auto& name : ys) {
    const auto yv = table.column(name);
    if (groups.empty()) {
      Series se{name, {}, yv};
      for (std::size_t i = 0; i < xs.size(); ++i) se.rows.push_back(i);
      series.push_back(std::move(se));
      continue;
    }
    for (double g : groups) {
      Series se{name + " " + spec.group + "=" + tick_label(g), {}, yv};
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (gv[i] == g) se.rows.push_back(i);
      series.push_back(std::move(se));
    }
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& se = series[k];
    const char* color = palette[k % std::size(palette)];
    std::string points;
    for (std::size_t i : se.rows) {
      if (!std::isfinite(xs[i]) || !usable(se.y[i])) continue;
      points += num(px(xs[i])) + "," + num(py(se.y[i])) + " ";
    }
    if (!points.empty()) points.pop_back();
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    s << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(left + pw + 32)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(se.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const ResultTable& table, const PlotSpec& spec, const std::string& path) {
  write_file(path, to_svg(table, spec));
}

}  // namespace qbm
