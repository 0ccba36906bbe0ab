#include "lieobs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lieobs {

namespace {

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << kCsvHeader << '\n';
  for (const auto& r : trace) {
    const double cols[] = {r.t, r.dE, r.btilde_w, r.btilde_v, r.lyap, r.lyap_dot, r.phi, r.condX};
    for (std::size_t j = 0; j < std::size(cols); ++j) {
      if (j) out << ',';
      put(out, cols[j]);
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out = open_output(path);
  write_csv(out, trace);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> values;
};

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 200.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kGap = 50.0;
constexpr std::size_t kMaxPoints = 1500;

void panel(std::ostringstream& svg, double top, const std::string& title,
           const std::vector<double>& t, const std::vector<Series>& series, bool log_scale) {
  auto tr = [&](double v) {
    return log_scale ? std::log10(std::max(v, 1e-16)) : v;
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : s.values) {
      lo = std::min(lo, tr(v));
      hi = std::max(hi, tr(v));
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double t0 = t.front();
  const double t1 = t.back() > t0 ? t.back() : t0 + 1.0;
  const double w = kWidth - kMarginLeft - kMarginRight;
  auto px = [&](double tv) { return kMarginLeft + w * (tv - t0) / (t1 - t0); };
  auto py = [&](double v) { return top + kPanelHeight * (1.0 - (tr(v) - lo) / (hi - lo)); };

  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << top << "\" width=\"" << w
      << "\" height=\"" << kPanelHeight << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << kMarginLeft << "\" y=\"" << top - 8 << "\" font-size=\"13\">" << title
      << "</text>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, log_scale ? "1e%.0f" : "%.3g", hi);
  svg << "<text x=\"4\" y=\"" << top + 10 << "\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, log_scale ? "1e%.0f" : "%.3g", lo);
  svg << "<text x=\"4\" y=\"" << top + kPanelHeight << "\" font-size=\"11\">" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof buf, "t = %.3g s", t1);
  svg << "<text x=\"" << kWidth - kMarginRight - 80 << "\" y=\"" << top + kPanelHeight + 14
      << "\" font-size=\"11\">" << buf << "</text>\n";

  const std::size_t stride = std::max<std::size_t>(1, t.size() / kMaxPoints);
  double legend_x = kMarginLeft + 150.0;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < t.size(); k += stride) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(t[k]), py(s.values[k]));
      svg << buf;
    }
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", px(t.back()), py(s.values.back()));
    svg << buf << "\"/>\n";
    svg << "<text x=\"" << legend_x << "\" y=\"" << top - 8 << "\" font-size=\"12\" fill=\""
        << s.color << "\">" << s.label << "</text>\n";
    legend_x += 90.0;
  }
}

}  // namespace

std::string render_svg(const std::vector<TraceRow>& trace) {
  if (trace.empty()) throw std::invalid_argument("render_svg: empty trace");
  std::vector<double> t, dE, bw, bv, lyap;
  for (const auto& r : trace) {
    t.push_back(r.t);
    dE.push_back(r.dE);
    bw.push_back(r.btilde_w);
    bv.push_back(r.btilde_v);
    lyap.push_back(r.lyap);
  }
  const double height = kMarginTop + 3 * kPanelHeight + 3 * kGap;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double top = kMarginTop;
  panel(svg, top, "d(E)", t, {{"d(E)", "#1f77b4", dE}}, true);
  top += kPanelHeight + kGap;
  panel(svg, top, "bias error", t,
        {{"|bw~|", "#d62728", bw}, {"|bv~|", "#2ca02c", bv}}, true);
  top += kPanelHeight + kGap;
  panel(svg, top, "Lyapunov", t, {{"L", "#9467bd", lyap}}, false);
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out = open_output(path);
  out << render_svg(trace);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace lieobs
