#include "gda/render.hpp"

#include <sstream>
#include <stdexcept>

namespace gda {

namespace {

constexpr int px = 10;

void line(std::ostringstream& os, int n, int l, int k, Dir d)
{
    const auto [i, j] = partner_black(l, k, d);
    const int wx = 2 * l - n, wy = n + 2 - 2 * k;
    const int bx = 2 * i - n - 1, by = n + 1 - 2 * j;
    os << "<line x1=\"" << wx * px << "\" y1=\"" << -wy * px << "\" x2=\"" << bx * px << "\" y2=\""
       << -by * px << "\" stroke=\"" << edge_color(d) << "\" stroke-width=\"4\" stroke-linecap=\"round\"/>\n";
}

std::string svg(int n, const Matching& m1, const Matching* m2)
{
    if (n < 1)
        throw std::invalid_argument("rendering needs n >= 1");
    // Vertices span x in [1-n, n+1] and y in [-n, n].
    const int x0 = (1 - n) * px, y0 = -n * px, w = 2 * n * px, h = 2 * n * px;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << y0 << ' ' << w << ' ' << h
       << "\" width=\"" << w << "\" height=\"" << h << "\">\n";
    for (int l = 1; l <= n; ++l)
        for (int k = 1; k <= n + 1; ++k) {
            const Dir d1 = m1(l, k);
            if (d1 == Dir::None)
                throw std::invalid_argument("cannot render a partial matching");
            if (!m2) {
                line(os, n, l, k, d1);
                continue;
            }
            const Dir d2 = (*m2)(l, k);
            if (d2 == Dir::None)
                throw std::invalid_argument("cannot render a partial matching");
            if (d1 != d2) {
                line(os, n, l, k, d1);
                line(os, n, l, k, d2);
            }
        }
    os << "</svg>\n";
    return os.str();
}

} // namespace

const char* edge_color(Dir d)
{
    switch (d) {
    case Dir::DL: return "#D62728";
    case Dir::DR: return "#2CA02C";
    case Dir::UR: return "#1F77B4";
    case Dir::UL: return "#FFD700";
    default: throw std::invalid_argument("no color for an empty edge");
    }
}

std::string render_svg(const Matching& m)
{
    return svg(m.n(), m, nullptr);
}

std::string render_double_dimer_svg(const Matching& m1, const Matching& m2)
{
    if (m1.n() != m2.n())
        throw std::invalid_argument("double-dimer matchings have mismatched sizes");
    return svg(m1.n(), m1, &m2);
}

} // namespace gda
