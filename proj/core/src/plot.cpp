#include "decouple/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "decouple/errors.hpp"

namespace decouple {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};
const std::array<const char*, 4> kDash = {"", "2,3", "7,4", "7,3,2,3"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-14 ? 0.0 : v);
  return buf;
}

std::string escape(std::string_view s) {
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

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1e-12, std::abs(lo) * 0.05 + 1e-3);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.03 * (hi - lo);
  return {lo - pad, hi + pad};
}

class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double v) const { return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void axes(std::ostringstream& os, const std::string& xl, const std::string& yl) const {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
       << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double xv = x_.lo + (x_.hi - x_.lo) * i / 5.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 5.0;
      os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
         << num(y0 + 5) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y0 + 20) << "\" text-anchor=\"middle\">"
         << tick_label(xv) << "</text>\n";
      os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(x0) << "\" y2=\""
         << num(py(yv)) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
         << tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 15)
       << "\" text-anchor=\"middle\" class=\"label\">" << escape(xl) << "</text>\n";
    os << "<text x=\"20\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" class=\"label\" transform=\"rotate(-90 20 "
       << num((y0 + y1) / 2) << ")\">" << escape(yl) << "</text>\n";
  }

 private:
  Range x_, y_;
};

void header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
     << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<style>.label{font-size:14px}</style>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" class=\"label\">"
       << escape(title) << "</text>\n";
  }
}

std::string default_y_label(const CsvTable& table) {
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    if (table.columns[c].rfind("dFdt", 0) == 0) return "dF/dt";
  }
  return "F";
}

// Five-stop viridis approximation, t in [0, 1].
std::string colour(double t) {
  static const std::array<std::array<double, 3>, 5> stops = {
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] * (1 - f) + stops[i + 1][0] * f)),
                static_cast<int>(std::lround(stops[i][1] * (1 - f) + stops[i + 1][1] * f)),
                static_cast<int>(std::lround(stops[i][2] * (1 - f) + stops[i + 1][2] * f)));
  return buf;
}

std::string line_plot(const CsvTable& table, const PlotOptions& opt) {
  if (table.columns.size() < 2) throw FormatError("line plot needs an abscissa and at least one curve");
  double xlo = table.rows.front()[0], xhi = xlo, ylo = table.rows.front()[1], yhi = ylo;
  for (const auto& r : table.rows) {
    xlo = std::min(xlo, r[0]);
    xhi = std::max(xhi, r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) {
      ylo = std::min(ylo, r[c]);
      yhi = std::max(yhi, r[c]);
    }
  }
  const Canvas cv(Range{xlo, xhi > xlo ? xhi : xlo + 1.0}, padded(ylo, yhi));
  std::ostringstream os;
  header(os, opt.title);
  cv.axes(os, opt.x_label.empty() ? table.columns[0] : opt.x_label,
          opt.y_label.empty() ? default_y_label(table) : opt.y_label);
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    const std::size_t s = c - 1;
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[s % kPalette.size()] << "\" stroke-width=\"1.5\"";
    if (*kDash[s % kDash.size()]) os << " stroke-dasharray=\"" << kDash[s % kDash.size()] << "\"";
    os << " points=\"";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      os << (k ? " " : "") << num(cv.px(table.rows[k][0])) << "," << num(cv.py(table.rows[k][c]));
    }
    os << "\"/>\n";
    const double ly = kTop + 20 + 20 * static_cast<double>(s);
    const double lx = kWidth - kRight + 15;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 30) << "\" y2=\"" << num(ly)
       << "\" stroke=\"" << kPalette[s % kPalette.size()] << "\" stroke-width=\"1.5\"";
    if (*kDash[s % kDash.size()]) os << " stroke-dasharray=\"" << kDash[s % kDash.size()] << "\"";
    os << "/>\n<text x=\"" << num(lx + 36) << "\" y=\"" << num(ly + 4) << "\">" << escape(table.columns[c])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const CsvTable& table, const PlotOptions& opt) {
  const std::size_t ct = table.column_index("theta");
  const std::size_t cp = table.column_index("phi");
  std::size_t cv_idx;
  if (!opt.value_column.empty()) {
    cv_idx = table.column_index(opt.value_column);
  } else {
    cv_idx = table.columns.size() > 2 ? 2 : 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c] == "fidelity") cv_idx = c;
    }
    if (cv_idx == ct || cv_idx == cp) throw FormatError("heatmap needs a value column");
  }

  std::map<double, std::size_t> thetas, phis;
  for (const auto& r : table.rows) {
    thetas.emplace(r[ct], 0);
    phis.emplace(r[cp], 0);
  }
  std::size_t i = 0;
  for (auto& [k, v] : thetas) v = i++;
  i = 0;
  for (auto& [k, v] : phis) v = i++;

  double vlo = table.rows.front()[cv_idx], vhi = vlo;
  for (const auto& r : table.rows) {
    vlo = std::min(vlo, r[cv_idx]);
    vhi = std::max(vhi, r[cv_idx]);
  }

  // phi along x, theta along y; each node is the centre of its cell.
  auto cell_range = [](const std::map<double, std::size_t>& m) {
    const double lo = m.begin()->first, hi = m.rbegin()->first;
    const double half = m.size() > 1 ? 0.5 * (hi - lo) / static_cast<double>(m.size() - 1) : 0.5;
    return Range{lo - half, hi + half};
  };
  const Range xr = cell_range(phis), yr = cell_range(thetas);
  const Canvas cv(xr, yr);
  const double cw = (cv.px(xr.hi) - cv.px(xr.lo)) / static_cast<double>(phis.size());
  const double ch = (cv.py(yr.lo) - cv.py(yr.hi)) / static_cast<double>(thetas.size());

  std::ostringstream os;
  header(os, opt.title);
  for (const auto& r : table.rows) {
    const double t = vhi > vlo ? (r[cv_idx] - vlo) / (vhi - vlo) : 1.0;
    const double x = cv.px(xr.lo) + cw * static_cast<double>(phis.at(r[cp]));
    const double y = cv.py(yr.lo) - ch * static_cast<double>(thetas.at(r[ct]) + 1);
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cw + 0.3) << "\" height=\""
       << num(ch + 0.3) << "\" fill=\"" << colour(t) << "\"/>\n";
  }
  cv.axes(os, opt.x_label.empty() ? "phi" : opt.x_label, opt.y_label.empty() ? "theta" : opt.y_label);

  const double bx = kWidth - kRight + 30, by0 = kHeight - kBottom, by1 = kTop;
  const int bands = 32;
  for (int b = 0; b < bands; ++b) {
    const double y = by0 - (by0 - by1) * (b + 1) / bands;
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(y) << "\" width=\"20\" height=\""
       << num((by0 - by1) / bands + 0.3) << "\" fill=\"" << colour((b + 0.5) / bands) << "\"/>\n";
  }
  os << "<text x=\"" << num(bx + 26) << "\" y=\"" << num(by0) << "\">" << tick_label(vlo) << "</text>\n";
  os << "<text x=\"" << num(bx + 26) << "\" y=\"" << num(by1 + 10) << "\">" << tick_label(vhi) << "</text>\n";
  os << "<text x=\"" << num(bx + 10) << "\" y=\"" << num(by1 - 8) << "\" text-anchor=\"middle\">"
     << escape(table.columns[cv_idx]) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "line") return PlotKind::line;
  if (name == "heatmap") return PlotKind::heatmap;
  throw ValidationError("kind", "unknown plot kind '" + std::string(name) + "' (expected line or heatmap)");
}

std::string emit_plot(const CsvTable& table, PlotKind kind, const PlotOptions& options) {
  if (table.columns.empty() || table.rows.empty()) throw FormatError("nothing to plot: table is empty");
  for (const auto& r : table.rows) {
    if (r.size() != table.columns.size()) throw FormatError("ragged table");
    for (double v : r) {
      if (!std::isfinite(v)) throw FormatError("table contains non-finite values");
    }
  }
  return kind == PlotKind::line ? line_plot(table, options) : heatmap(table, options);
}

void emit_plot(const CsvTable& table, PlotKind kind, const std::filesystem::path& out, const PlotOptions& options) {
  const std::string svg = emit_plot(table, kind, options);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error("cannot open " + out.string() + " for writing");
  os << svg;
}

}  // namespace decouple
