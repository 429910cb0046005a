#pragma once

#include <iosfwd>
#include <string>

#include "corrfit/biplot.hpp"

namespace corrfit {

// Standalone SVG of a rank-2 scene: centered axes, optional unit circle,
// labeled variable arrows, observation dots, dotted MDS segments and
// calibrated scales. Output bytes are a pure function of the scene (fixed
// 4-decimal coordinates, no timestamps), so golden-file tests are byte-exact.
void render_svg(const BiplotScene& scene, std::ostream& out);
void render_svg(const BiplotScene& scene, const std::string& path);

}  // namespace corrfit
