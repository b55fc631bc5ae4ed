#include "meltline/svg_plot.hpp"

#include "meltline/csv.hpp"
#include "meltline/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace meltline {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 46;
constexpr int kMarginBottom = 56;

const char* kPalette[] = {"#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c",
                          "#0891b2", "#ca8a04", "#db2777", "#4b5563", "#65a30d",
                          "#7c3aed", "#0d9488"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escapeXml(const std::string& text) {
    std::string out;
    for (const char c : text) {
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

std::string num(double v) { return formatFixed(v, 2); }

struct Scale {
    double lo = 0.0, hi = 1.0;
    double pixLo = 0.0, pixHi = 1.0;

    double operator()(double v) const {
        if (hi == lo) return (pixLo + pixHi) / 2.0;
        return pixLo + (v - lo) / (hi - lo) * (pixHi - pixLo);
    }
};

// Round tick spacing to 1/2/5 x 10^n covering [lo, hi] with ~5 ticks.
std::vector<double> niceTicks(double lo, double hi) {
    if (hi <= lo) return {lo};
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0})
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return ticks;
}

std::string tickLabel(double v) {
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-2)) {
        std::ostringstream out;
        out.precision(2);
        out << v;
        return out.str();
    }
    std::string s = formatFixed(v, 2);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s.empty() ? "0" : s;
}

void openSvg(std::ostringstream& svg, const std::string& title) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"#ffffff\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"17\" fill=\"#111827\">"
        << escapeXml(title) << "</text>\n";
}

void drawFrameAndAxes(std::ostringstream& svg, const Scale& sx, const Scale& sy,
                      const std::string& xLabel, const std::string& yLabel, bool xTicks) {
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << kWidth - kMarginLeft - kMarginRight << "\" height=\""
        << kHeight - kMarginTop - kMarginBottom
        << "\" fill=\"none\" stroke=\"#9ca3af\" stroke-width=\"1\"/>\n";
    for (const double t : niceTicks(sy.lo, sy.hi)) {
        const double y = sy(t);
        svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(y) << "\" x2=\""
            << kWidth - kMarginRight << "\" y2=\"" << num(y)
            << "\" stroke=\"#e5e7eb\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
               "fill=\"#374151\">"
            << tickLabel(t) << "</text>\n";
    }
    if (xTicks)
        for (const double t : niceTicks(sx.lo, sx.hi)) {
            const double x = sx(t);
            svg << "<line x1=\"" << num(x) << "\" y1=\"" << kHeight - kMarginBottom
                << "\" x2=\"" << num(x) << "\" y2=\"" << kHeight - kMarginBottom + 5
                << "\" stroke=\"#9ca3af\" stroke-width=\"1\"/>\n"
                << "<text x=\"" << num(x) << "\" y=\"" << kHeight - kMarginBottom + 20
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                   "fill=\"#374151\">"
                << tickLabel(t) << "</text>\n";
        }
    svg << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
        << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#111827\">"
        << escapeXml(xLabel) << "</text>\n"
        << "<text x=\"20\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#111827\" transform=\"rotate(-90 20 "
        << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">" << escapeXml(yLabel)
        << "</text>\n";
}

} // namespace

void writeLinePlot(const std::string& path, const std::string& title,
                   const std::string& xLabel, const std::string& yLabel,
                   const std::vector<PlotSeries>& series) {
    if (series.empty()) fail("BadParams", "line plot needs at least one series");
    double xLo = series[0].x.minCoeff(), xHi = series[0].x.maxCoeff();
    double yLo = series[0].y.minCoeff(), yHi = series[0].y.maxCoeff();
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.size() == 0)
            fail("BadParams", "series '" + s.label + "' is empty or ragged");
        xLo = std::min(xLo, s.x.minCoeff());
        xHi = std::max(xHi, s.x.maxCoeff());
        yLo = std::min(yLo, s.y.minCoeff());
        yHi = std::max(yHi, s.y.maxCoeff());
    }
    if (yHi == yLo) {
        yHi += 1.0;
        yLo -= 1.0;
    }
    const Scale sx{xLo, xHi, double(kMarginLeft), double(kWidth - kMarginRight)};
    const Scale sy{yLo, yHi, double(kHeight - kMarginBottom), double(kMarginTop)};

    std::ostringstream svg;
    openSvg(svg, title);
    drawFrameAndAxes(svg, sx, sy, xLabel, yLabel, true);
    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (Eigen::Index i = 0; i < series[s].x.size(); ++i)
            svg << num(sx(series[s].x(i))) << "," << num(sy(series[s].y(i)))
                << (i + 1 < series[s].x.size() ? " " : "");
        svg << "\"/>\n";
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << kWidth - kMarginRight + 10 << "\" y1=\"" << num(ly - 4)
            << "\" x2=\"" << kWidth - kMarginRight + 30 << "\" y2=\"" << num(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kMarginRight + 36 << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111827\">"
            << escapeXml(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    writeTextFile(path, svg.str());
}

void writeBarChart(const std::string& path, const std::string& title,
                   const std::string& xLabel, const std::string& yLabel,
                   const std::vector<std::string>& labels, const Eigen::VectorXd& values) {
    if (values.size() == 0 || static_cast<Eigen::Index>(labels.size()) != values.size())
        fail("BadParams", "bar chart labels and values disagree");
    const double yLo = std::min(0.0, values.minCoeff());
    double yHi = std::max(0.0, values.maxCoeff());
    if (yHi == yLo) yHi = yLo + 1.0;
    const Scale sy{yLo, yHi, double(kHeight - kMarginBottom), double(kMarginTop)};
    const Scale sx{0.0, 1.0, double(kMarginLeft), double(kWidth - kMarginRight)};

    std::ostringstream svg;
    openSvg(svg, title);
    drawFrameAndAxes(svg, sx, sy, xLabel, yLabel, false);
    const double slot = (sx.pixHi - sx.pixLo) / static_cast<double>(values.size());
    const double barWidth = slot * 0.64;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double xc = sx.pixLo + slot * (static_cast<double>(i) + 0.5);
        const double y0 = sy(0.0);
        const double y1 = sy(values(i));
        svg << "<rect x=\"" << num(xc - barWidth / 2) << "\" y=\"" << num(std::min(y0, y1))
            << "\" width=\"" << num(barWidth) << "\" height=\"" << num(std::abs(y0 - y1))
            << "\" fill=\"" << kPalette[static_cast<size_t>(i) % kPaletteSize] << "\"/>\n"
            << "<text x=\"" << num(xc) << "\" y=\"" << kHeight - kMarginBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "fill=\"#374151\">"
            << escapeXml(labels[static_cast<size_t>(i)]) << "</text>\n";
    }
    svg << "</svg>\n";
    writeTextFile(path, svg.str());
}

} // namespace meltline
