#include <algorithm>
#include <cmath>

#include "nomsdm/capacity.hpp"
#include "nomsdm/weight_io.hpp"

namespace nomsdm {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 160.0;
constexpr double top = 30.0;
constexpr double bottom = 55.0;

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

/// Round step (1, 2 or 5 times a power of ten) giving at most ~6 ticks.
double tick_step(double span)
{
    if (span <= 0.0) {
        return 1.0;
    }
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
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

std::string num(double v)
{
    return format_number(std::round(v * 100.0) / 100.0);
}

} // namespace

std::string render_svg(std::span<const CapacityCurve> curves, std::span<const std::string> labels)
{
    if (curves.empty()) {
        throw InvalidInput("render_svg: no curves");
    }
    if (labels.size() != curves.size()) {
        throw InvalidInput("render_svg: one label per curve is required");
    }
    double x_max = 1.0;
    double y_max = 1.0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            x_max = std::max(x_max, static_cast<double>(p.pairs_written));
            y_max = std::max(y_max, static_cast<double>(p.pairs_recalled));
        }
    }
    const double x_step = tick_step(x_max);
    const double y_step = tick_step(y_max);
    x_max = std::ceil(x_max / x_step) * x_step;
    y_max = std::ceil(y_max / y_step) * y_step;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const auto sx = [&](double x) { return left + x / x_max * plot_w; };
    const auto sy = [&](double y) { return top + plot_h - y / y_max * plot_h; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\""
                      + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g stroke=\"black\" fill=\"none\">\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w)
           + "\" y2=\"" + num(top + plot_h) + "\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\""
           + num(top + plot_h) + "\"/>\n";
    svg += "</g>\n";

    for (double x = 0.0; x <= x_max + 1e-9; x += x_step) {
        svg += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(top + plot_h + 16) + "\" text-anchor=\"middle\">"
               + format_number(x) + "</text>\n";
    }
    for (double y = 0.0; y <= y_max + 1e-9; y += y_step) {
        svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(y) + 4) + "\" text-anchor=\"end\">"
               + format_number(y) + "</text>\n";
    }
    svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 12)
           + "\" text-anchor=\"middle\">pairs written</text>\n";
    svg += "<text transform=\"translate(18 " + num(top + plot_h / 2)
           + ") rotate(-90)\" text-anchor=\"middle\">pairs recalled</text>\n";

    for (std::size_t k = 0; k < curves.size(); ++k) {
        const char* colour = palette[k % std::size(palette)];
        std::string pts;
        for (const auto& p : curves[k].points) {
            if (!pts.empty()) {
                pts += ' ';
            }
            pts += num(sx(static_cast<double>(p.pairs_written))) + ","
                   + num(sy(static_cast<double>(p.pairs_recalled)));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\""
               + pts + "\"/>\n";
    }

    svg += "<g class=\"legend\">\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const double y = top + 10 + 18.0 * static_cast<double>(k);
        const double x = left + plot_w + 12;
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 20) + "\" y2=\"" + num(y)
               + "\" stroke=\"" + palette[k % std::size(palette)] + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(x + 26) + "\" y=\"" + num(y + 4) + "\">" + escape(labels[k]) + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

void emit_plot(std::span<const CapacityCurve> curves, std::span<const std::string> labels,
               const std::filesystem::path& destination)
{
    write_file(destination, render_svg(curves, labels));
}

} // namespace nomsdm
