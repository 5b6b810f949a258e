#pragma once

#include <string>

namespace v2xsim {

// Renders one figure analog as SVG from the CSVs a previous run emitted into
// in_dir. figure is one of fig1, fig3, fig4, fig5, fig6, fig7. Pure function
// of the CSV contents; throws std::runtime_error on missing or malformed
// input.
std::string render_figure(const std::string& in_dir, const std::string& figure);

}  // namespace v2xsim
