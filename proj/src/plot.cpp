#include "crn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace crn {

namespace {

constexpr double kWidth = 720, kHeight = 440, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void write_svg_plot(std::ostream& out, const std::string& title, const std::vector<PlotSeries>& series,
                    bool log_x) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (log_x && !(s.x[k] > 0)) continue;
      if (!std::isfinite(s.y[k])) continue;
      xlo = std::min(xlo, tx(s.x[k]));
      xhi = std::max(xhi, tx(s.x[k]));
      ylo = std::min(ylo, s.y[k]);
      yhi = std::max(yhi, s.y[k]);
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) yhi = ylo + 1;
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - xlo) / (xhi - xlo) * pw; };
  auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks: decades on a log axis, five even ticks otherwise
  if (log_x) {
    for (int d = static_cast<int>(std::ceil(xlo)); d <= static_cast<int>(std::floor(xhi)); ++d) {
      const double x = kLeft + (d - xlo) / (xhi - xlo) * pw;
      out << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\"" << kTop + ph + 5
          << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
  } else {
    for (int k = 0; k <= 4; ++k) {
      const double v = xlo + (xhi - xlo) * k / 4.0;
      const double x = kLeft + pw * k / 4.0;
      out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << v << "</text>\n";
    }
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = ylo + (yhi - ylo) * k / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << (log_x ? "t (log scale)" : "t") << "</text>\n";

  for (std::size_t j = 0; j < series.size(); ++j) {
    const auto& s = series[j];
    const char* color = kPalette[j % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (log_x && !(s.x[k] > 0)) continue;
      if (!std::isfinite(s.y[k])) continue;
      out << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(j + 1);
    out << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw + 30 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 35 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace crn
