#include "translab/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace translab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double xmin, xmax, ymin, ymax;
  bool equal_aspect;
  double sx() const { return (kWidth - 2 * kMargin) / (xmax - xmin); }
  double sy() const { return (kHeight - 2 * kMargin) / (ymax - ymin); }
  double px(double x) const {
    const double s = equal_aspect ? std::min(sx(), sy()) : sx();
    return kMargin + (x - xmin) * s;
  }
  double py(double y) const {
    const double s = equal_aspect ? std::min(sx(), sy()) : sy();
    return kHeight - kMargin - (y - ymin) * s;
  }
};

void open_svg(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostream& out, const Frame& fr, const std::string& xlabel, const std::string& ylabel) {
  const double x0 = fr.px(fr.xmin), x1 = fr.px(fr.xmax), y0 = fr.py(fr.ymin), y1 = fr.py(fr.ymax);
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
      << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + 16) << "\">" << label(fr.xmin) << "</text>\n";
  out << "<text x=\"" << num(x1) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"end\">" << label(fr.xmax)
      << "</text>\n";
  out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0) << "\" text-anchor=\"end\">" << label(fr.ymin)
      << "</text>\n";
  out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y1 + 10) << "\" text-anchor=\"end\">" << label(fr.ymax)
      << "</text>\n";
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y0 + 32) << "\" text-anchor=\"middle\">"
      << escape(xlabel) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num((y0 + y1) / 2) << ")\">" << escape(ylabel) << "</text>\n";
  out << "</g>\n";
}

}  // namespace

std::vector<Segment> contour_segments(const HeightField& f, double level) {
  const GridDomain& g = f.domain();
  std::vector<Segment> segs;
  auto lerp = [&](double xa, double ya, double va, double xb, double yb, double vb) {
    const double t = (level - va) / (vb - va);
    return std::pair<double, double>{xa + t * (xb - xa), ya + t * (yb - ya)};
  };
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (g.tag(i, j) == NodeTag::Exterior || g.tag(i + 1, j) == NodeTag::Exterior ||
          g.tag(i, j + 1) == NodeTag::Exterior || g.tag(i + 1, j + 1) == NodeTag::Exterior) {
        continue;
      }
      // Corners counterclockwise from lower-left.
      const double xs[4] = {g.x(i), g.x(i + 1), g.x(i + 1), g.x(i)};
      const double ys[4] = {g.y(j), g.y(j), g.y(j + 1), g.y(j + 1)};
      const double vs[4] = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
      int code = 0;
      for (int k = 0; k < 4; ++k) {
        if (vs[k] >= level) code |= 1 << k;
      }
      if (code == 0 || code == 15) continue;
      // Crossing point on edge k (between corner k and k+1).
      auto edge = [&](int k) {
        const int m = (k + 1) % 4;
        return lerp(xs[k], ys[k], vs[k], xs[m], ys[m], vs[m]);
      };
      std::vector<int> crossed;
      for (int k = 0; k < 4; ++k) {
        const bool a = (code >> k) & 1;
        const bool b = (code >> ((k + 1) % 4)) & 1;
        if (a != b) crossed.push_back(k);
      }
      if (crossed.size() == 2) {
        const auto p = edge(crossed[0]);
        const auto q = edge(crossed[1]);
        segs.push_back({p.first, p.second, q.first, q.second});
      } else {
        // Saddle: pair the edges according to the center value.
        const double center = 0.25 * ((vs[0] + vs[2]) + (vs[1] + vs[3]));
        const bool center_high = center >= level;
        const bool c0_high = code & 1;
        const auto e0 = edge(0), e1 = edge(1), e2 = edge(2), e3 = edge(3);
        if (center_high == c0_high) {
          segs.push_back({e0.first, e0.second, e1.first, e1.second});
          segs.push_back({e2.first, e2.second, e3.first, e3.second});
        } else {
          segs.push_back({e3.first, e3.second, e0.first, e0.second});
          segs.push_back({e1.first, e1.second, e2.first, e2.second});
        }
      }
    }
  }
  return segs;
}

std::vector<double> contour_levels(const HeightField& f, int count) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : f.values()) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<double> levels;
  if (!(hi > lo) || count < 1) return levels;
  for (int k = 1; k <= count; ++k) levels.push_back(lo + (hi - lo) * k / (count + 1));
  return levels;
}

void write_contour_svg(const std::filesystem::path& path, const HeightField& f, int levels,
                       const std::string& title, const std::vector<Marker>& markers) {
  const GridDomain& g = f.domain();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  Frame fr{g.x(0), g.x(g.nx() - 1), g.y(0), g.y(g.ny() - 1), true};
  open_svg(out, title);
  axes(out, fr, "x", "y");
  const auto lv = contour_levels(f, levels);
  for (std::size_t n = 0; n < lv.size(); ++n) {
    out << "<g stroke=\"" << kPalette[n % 7] << "\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<title>z = " << label(lv[n]) << "</title>\n";
    std::ostringstream d;
    for (const Segment& s : contour_segments(f, lv[n])) {
      d << 'M' << num(fr.px(s.x0)) << ' ' << num(fr.py(s.y0)) << 'L' << num(fr.px(s.x1)) << ' ' << num(fr.py(s.y1));
    }
    if (!d.str().empty()) out << "<path d=\"" << d.str() << "\"/>\n";
    out << "</g>\n";
  }
  for (const Marker& m : markers) {
    out << "<circle cx=\"" << num(fr.px(m.x)) << "\" cy=\"" << num(fr.py(m.y))
        << "\" r=\"4\" fill=\"black\"/>\n";
    if (!m.label.empty()) {
      out << "<text x=\"" << num(fr.px(m.x) + 6) << "\" y=\"" << num(fr.py(m.y) - 6)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(m.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                         const std::string& ylabel, const std::vector<Series>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const Series& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  Frame fr{xmin, xmax, ymin - pad, ymax + pad, false};
  open_svg(out, title);
  axes(out, fr, xlabel, ylabel);
  for (std::size_t n = 0; n < series.size(); ++n) {
    const Series& s = series[n];
    std::ostringstream d;
    bool pen = false;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
        pen = false;
        continue;
      }
      d << (pen ? 'L' : 'M') << num(fr.px(s.x[k])) << ' ' << num(fr.py(s.y[k]));
      pen = true;
    }
    out << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << kPalette[n % 7] << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    out << "<text x=\"" << num(kWidth - kMargin - 4) << "\" y=\"" << num(kMargin + 14 + 14 * n)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[n % 7] << "\">"
        << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace translab
