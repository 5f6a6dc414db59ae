#pragma once

#include <string>
#include <vector>

namespace spingp {

/// Minimal deterministic SVG line-plot emitter: axes box, tick labels at the
/// data extremes, one polyline per series. Optional log10 mapping per axis.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label,
            bool log_x = false, bool log_y = false);

    void add_series(const std::string& name, const std::vector<double>& x,
                    const std::vector<double>& y, const std::string& color);

    void write(const std::string& path) const;

private:
    struct Series {
        std::string name, color;
        std::vector<double> x, y;
    };
    std::string title_, x_label_, y_label_;
    bool log_x_, log_y_;
    std::vector<Series> series_;
};

}  // namespace spingp
