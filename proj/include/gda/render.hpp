#ifndef GDA_RENDER_HPP
#define GDA_RENDER_HPP

#include <string>

#include "gda/aztec.hpp"

namespace gda {

// Stroke colors by edge type.
const char* edge_color(Dir d);

// SVG of a matching in the canonical embedding, 10 px per unit, y up,
// viewBox tight to the vertex set. One <line> per dimer.
std::string render_svg(const Matching& m);
// Symmetric difference of two matchings of the same size.
std::string render_double_dimer_svg(const Matching& m1, const Matching& m2);

} // namespace gda

#endif
