#pragma once

#include <span>
#include <string>
#include <string_view>

#include "psyrisk/domain.hpp"

namespace psyrisk {

struct ScatterPoint {
    std::string id;
    Domain domain = Domain::Other;
    double x = 0.0;
    double y = 0.0;
};

/// Header "id,domain,x,y"; ids are quoted when they contain a comma or quote.
std::string scatter_csv(std::span<const ScatterPoint> points);

/// Static SVG 1.1 scatter plot, one fixed color per domain, with a legend
/// listing the domains present.
std::string scatter_svg(std::span<const ScatterPoint> points, std::string_view title);

}  // namespace psyrisk
