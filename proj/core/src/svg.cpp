#include "lassolab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace lassolab {

namespace {

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// round a raw step to 1/2/5 times a power of ten
double nice_step(double span, int n_ticks) {
    if (span <= 0.0) return 1.0;
    const double raw = span / n_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

}  // namespace

void render_curves_svg(const std::vector<CurveSeries>& series, const std::string& path,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("render_curves_svg: no series");
    const std::size_t len = series.front().xs.size();
    for (const CurveSeries& s : series) {
        if (s.xs.size() != len || s.ys.size() != len || len == 0)
            throw std::invalid_argument("render_curves_svg: series must be nonempty and of equal lengths");
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const CurveSeries& s : series) {
        for (double v : s.xs) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.ys) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double width = 760, height = 480;
    const double ml = 80, mr = 170, mt = 48, mb = 58;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("render_curves_svg: cannot open " + path);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt6(width)
        << "\" height=\"" << fmt6(height) << "\" viewBox=\"0 0 " << fmt6(width) << " "
        << fmt6(height) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fmt6(width) << "\" height=\"" << fmt6(height)
        << "\" fill=\"white\"/>\n";

    if (!title.empty())
        out << "<text x=\"" << fmt6(ml + pw / 2) << "\" y=\"24\" font-size=\"16\" "
            << "text-anchor=\"middle\" font-family=\"sans-serif\">" << xml_escape(title)
            << "</text>\n";

    // axes
    out << "<line x1=\"" << fmt6(ml) << "\" y1=\"" << fmt6(mt + ph) << "\" x2=\"" << fmt6(ml + pw)
        << "\" y2=\"" << fmt6(mt + ph) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fmt6(ml) << "\" y1=\"" << fmt6(mt) << "\" x2=\"" << fmt6(ml)
        << "\" y2=\"" << fmt6(mt + ph) << "\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xmax - xmin, 6);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep; x += xstep) {
        out << "<line x1=\"" << fmt6(px(x)) << "\" y1=\"" << fmt6(mt + ph) << "\" x2=\""
            << fmt6(px(x)) << "\" y2=\"" << fmt6(mt + ph + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt6(px(x)) << "\" y=\"" << fmt6(mt + ph + 20)
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt6(x)
            << "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin, 6);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep; y += ystep) {
        out << "<line x1=\"" << fmt6(ml - 5) << "\" y1=\"" << fmt6(py(y)) << "\" x2=\"" << fmt6(ml)
            << "\" y2=\"" << fmt6(py(y)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt6(ml - 8) << "\" y=\"" << fmt6(py(y) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt6(y)
            << "</text>\n";
    }

    out << "<text x=\"" << fmt6(ml + pw / 2) << "\" y=\"" << fmt6(height - 12)
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << xml_escape(x_label) << "</text>\n";
    if (!y_label.empty())
        out << "<text x=\"18\" y=\"" << fmt6(mt + ph / 2)
            << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "transform=\"rotate(-90 18 " << fmt6(mt + ph / 2) << ")\">" << xml_escape(y_label)
            << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < len; ++i) {
            if (i) out << ' ';
            out << fmt6(px(series[k].xs[i])) << ',' << fmt6(py(series[k].ys[i]));
        }
        out << "\"/>\n";
        const double ly = mt + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << fmt6(ml + pw + 12) << "\" y1=\"" << fmt6(ly) << "\" x2=\""
            << fmt6(ml + pw + 34) << "\" y2=\"" << fmt6(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fmt6(ml + pw + 40) << "\" y=\"" << fmt6(ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(series[k].label)
            << "</text>\n";
    }

    out << "</svg>\n";
    if (!out) throw IoError("render_curves_svg: write failed for " + path);
}

}  // namespace lassolab
