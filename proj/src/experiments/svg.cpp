#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sparsekit/experiments.hpp"

namespace sparsekit {
namespace {

// Linear ramp from deep blue (-300 dB) to yellow (+300 dB).
std::string colour(double snr) {
  const double t = std::clamp((snr + kSnrSentinel) / (2.0 * kSnrSentinel), 0.0, 1.0);
  const int r = static_cast<int>(std::lround(20 + t * (250 - 20)));
  const int g = static_cast<int>(std::lround(30 + t * (220 - 30)));
  const int b = static_cast<int>(std::lround(120 + t * (60 - 120)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string phase_heatmap_svg(const std::vector<PhaseCell>& cells, const PhaseConfig& cfg, const std::string& solver) {
  const int res = cfg.resolution;
  const int cell_px = 48;
  const int left = 70, top = 40, bottom = 60;
  const int width = left + res * cell_px + 20;
  const int height = top + res * cell_px + bottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<title>" << solver << ": mean SNR (dB), colour linear from -300 to +300</title>\n";
  svg << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << solver << " mean SNR (dB)</text>\n";
  // delta runs left to right, rho bottom to top.
  for (const auto& c : cells) {
    const int i = static_cast<int>(c.index) / res;
    const int j = static_cast<int>(c.index) % res;
    const int x = left + i * cell_px;
    const int y = top + (res - 1 - j) * cell_px;
    const double v = c.mean_snr.at(solver);
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_px << "\" height=\"" << cell_px
        << "\" fill=\"" << colour(v) << "\"/>\n";
    svg << "<text x=\"" << x + cell_px / 2 << "\" y=\"" << y + cell_px / 2 + 3
        << "\" text-anchor=\"middle\" fill=\"" << (v > 0 ? "black" : "white") << "\">" << fixed(v, 0) << "</text>\n";
  }
  for (int i = 0; i < res; ++i) {
    const auto& c = cells[static_cast<std::size_t>(i * res)];
    svg << "<text x=\"" << left + i * cell_px + cell_px / 2 << "\" y=\"" << top + res * cell_px + 14
        << "\" text-anchor=\"middle\">" << fixed(c.delta, 2) << "</text>\n";
  }
  for (int j = 0; j < res; ++j) {
    const auto& c = cells[static_cast<std::size_t>(j)];
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + (res - 1 - j) * cell_px + cell_px / 2 + 3
        << "\" text-anchor=\"end\">" << fixed(c.rho, 2) << "</text>\n";
  }
  svg << "<text x=\"" << left + res * cell_px / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\">delta = n/m</text>\n";
  svg << "<text x=\"14\" y=\"" << top + res * cell_px / 2 << "\" transform=\"rotate(-90 14 " << top + res * cell_px / 2
      << ")\" text-anchor=\"middle\">rho = k/n</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sparsekit
