#include "spingp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace spingp {

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label,
                 bool log_x, bool log_y)
    : title_(std::move(title)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label)), log_x_(log_x), log_y_(log_y) {}

void SvgPlot::add_series(const std::string& name, const std::vector<double>& x,
                         const std::vector<double>& y, const std::string& color) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("SvgPlot: series must be nonempty and aligned");
    series_.push_back({name, color, x, y});
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void SvgPlot::write(const std::string& path) const {
    if (series_.empty()) throw std::runtime_error("SvgPlot: nothing to plot");
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;

    auto tx = [&](double v) { return log_x_ ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y_ ? std::log10(v) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_x_ && !(s.x[i] > 0.0)) throw std::invalid_argument("SvgPlot: log x needs positive data");
            if (log_y_ && !(s.y[i] > 0.0)) throw std::invalid_argument("SvgPlot: log y needs positive data");
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("SvgPlot: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title_ << "</text>\n";
    // axes box
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
        << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    const std::string xl = log_x_ ? x_label_ + " (log10)" : x_label_;
    const std::string yl = log_y_ ? y_label_ + " (log10)" : y_label_;
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xl << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << H / 2
        << ")\">" << yl << "</text>\n";
    // extreme tick labels (in transformed coordinates)
    out << "<text x=\"" << ml << "\" y=\"" << H - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmin) << "</text>\n";
    out << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmax) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(ymin) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(ymax) << "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series_) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - mr - 6 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">"
            << s.name << "</text>\n";
        legend_y += 14;
    }
    out << "</svg>\n";
}

}  // namespace spingp
