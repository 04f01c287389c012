#include "psyrisk/pipeline/plot.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <fmt/format.h>

namespace psyrisk {

namespace {

constexpr std::array<std::string_view, kNumDomains> kColors{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
};

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 50.0;
constexpr double kLegendWidth = 170.0;

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string xml_escape(std::string_view s)
{
    std::string out;
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    double map(double v, double out_lo, double out_hi) const
    {
        const double span = hi - lo;
        if (!(span > 0.0)) {
            return 0.5 * (out_lo + out_hi);
        }
        return out_lo + (v - lo) / span * (out_hi - out_lo);
    }
};

}  // namespace

std::string scatter_csv(std::span<const ScatterPoint> points)
{
    std::string out = "id,domain,x,y\n";
    for (const auto& p : points) {
        out += fmt::format("{},{},{:.17g},{:.17g}\n", csv_field(p.id), domain_name(p.domain), p.x, p.y);
    }
    return out;
}

std::string scatter_svg(std::span<const ScatterPoint> points, std::string_view title)
{
    Range xr;
    Range yr;
    std::array<bool, kNumDomains> present{};
    for (const auto& p : points) {
        xr.add(p.x);
        yr.add(p.y);
        present[domain_index(p.domain)] = true;
    }
    const double plot_right = kWidth - kLegendWidth;
    const double plot_bottom = kHeight - kMargin;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        kWidth, kHeight, kWidth, kHeight);
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth,
                       kHeight);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"16\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       (kMargin + plot_right) / 2.0, kMargin / 2.0 + 5.0, xml_escape(title));
    out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                       "stroke=\"#333333\"/>\n",
                       kMargin, kMargin, plot_right - kMargin, plot_bottom - kMargin);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">LD1</text>\n",
                       (kMargin + plot_right) / 2.0, kHeight - kMargin / 2.0 + 5.0);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\" transform=\"rotate(-90 {:.1f} {:.1f})\">LD2</text>\n",
                       kMargin / 2.0, kHeight / 2.0, kMargin / 2.0, kHeight / 2.0);

    const double pad = 8.0;
    out += "<g stroke=\"none\" fill-opacity=\"0.7\">\n";
    for (const auto& p : points) {
        const double cx = xr.map(p.x, kMargin + pad, plot_right - pad);
        const double cy = yr.map(p.y, plot_bottom - pad, kMargin + pad);
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", cx, cy,
                           kColors[domain_index(p.domain)]);
    }
    out += "</g>\n";

    double ly = kMargin + 10.0;
    const double lx = plot_right + 20.0;
    for (Domain d : kAllDomains) {
        if (!present[domain_index(d)]) {
            continue;
        }
        out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"5\" fill=\"{}\"/>\n", lx, ly,
                           kColors[domain_index(d)]);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" "
                           "font-size=\"12\">{}</text>\n",
                           lx + 12.0, ly + 4.0, xml_escape(domain_display_name(d)));
        ly += 20.0;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace psyrisk
