#include "edgepart/cli/svg.hpp"

#include "edgepart/cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace edgepart::cli {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 50;

} // namespace

std::string render_gain_svg(const std::vector<SweepPoint>& points)
{
    if (points.empty())
        throw std::runtime_error("plot: no data rows");

    double x_lo = points.front().rho_mean, x_hi = points.back().rho_mean;
    double y_lo = 0.0, y_hi = 0.0;
    for (const auto& p : points) {
        x_lo = std::min(x_lo, p.rho_mean);
        x_hi = std::max(x_hi, p.rho_mean);
        y_lo = std::min({y_lo, p.gain_dou, p.gain_doe});
        y_hi = std::max({y_hi, p.gain_dou, p.gain_doe});
    }
    if (x_hi == x_lo) {
        x_lo -= 0.05;
        x_hi += 0.05;
    }
    if (y_hi == y_lo)
        y_hi = y_lo + 0.01;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };
    auto num = [](double v) { return format_number(v); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << kTop + ph << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\"/>\n</g>\n";
    if (y_lo < 0.0 && y_hi > 0.0)
        o << "<line class=\"zero\" x1=\"" << kLeft << "\" y1=\"" << num(sy(0.0)) << "\" x2=\""
          << kLeft + pw << "\" y2=\"" << num(sy(0.0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

    o << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double x = x_lo + (x_hi - x_lo) * k / 4.0;
        const double y = y_lo + (y_hi - y_lo) * k / 4.0;
        o << "<text x=\"" << num(sx(x)) << "\" y=\"" << kTop + ph + 16
          << "\" text-anchor=\"middle\">" << num(std::round(x * 1000) / 1000) << "</text>\n";
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(y) + 4)
          << "\" text-anchor=\"end\">" << num(std::round(y * 1e4) / 100) << "%</text>\n";
    }
    o << "</g>\n";
    o << "<text class=\"xlabel\" x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">mean rate ratio rho</text>\n";
    o << "<text class=\"ylabel\" x=\"16\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 16 "
      << kTop + ph / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">latency gain of adaptive</text>\n";

    auto polyline = [&](const char* cls, const char* colour, double SweepPoint::*field) {
        o << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour
          << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < points.size(); ++i)
            o << (i ? " " : "") << num(sx(points[i].rho_mean)) << ',' << num(sy(points[i].*field));
        o << "\"/>\n";
    };
    polyline("gain-dou", "#1f77b4", &SweepPoint::gain_dou);
    polyline("gain-doe", "#d62728", &SweepPoint::gain_doe);

    o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<text x=\"" << kLeft + pw - 150 << "\" y=\"" << kTop + 14 << "\" fill=\"#1f77b4\">vs DoU only</text>\n"
      << "<text x=\"" << kLeft + pw - 150 << "\" y=\"" << kTop + 30 << "\" fill=\"#d62728\">vs DoE only</text>\n"
      << "</g>\n";

    std::vector<double> rho, diff;
    for (const auto& p : points) {
        rho.push_back(p.rho_mean);
        diff.push_back(p.t_dou - p.t_doe);
    }
    const auto inflection = estimate_inflection(rho, diff);
    if (inflection.defined) {
        // Gain against either baseline is equal where t_dou == t_doe.
        double g = points.front().gain_dou;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            if (rho[i] == inflection.rho_lo) {
                const double span = rho[i + 1] - rho[i];
                const double w = span > 0 ? (inflection.rho_star - rho[i]) / span : 0.0;
                g = points[i].gain_dou + w * (points[i + 1].gain_dou - points[i].gain_dou);
            }
        o << "<circle class=\"inflection\" data-rho=\"" << num(inflection.rho_star) << "\" cx=\""
          << num(sx(inflection.rho_star)) << "\" cy=\"" << num(sy(g))
          << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace edgepart::cli
