#include "gda/paths.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gda {

std::vector<LatticePoint> Path::vertices() const
{
    std::vector<LatticePoint> v{start};
    LatticePoint q = start;
    for (char c : steps) {
        switch (c) {
            case 'H': ++q.x; break;
            case 'D': ++q.x; --q.y; break;
            case 'V': --q.y; break;
            default: throw std::invalid_argument(std::string("bad path step '") + c + "'");
        }
        v.push_back(q);
    }
    return v;
}

LatticePoint Path::end() const
{
    return vertices().back();
}

void PathTuple::check() const
{
    if (static_cast<int>(paths.size()) != p)
        throw std::logic_error("path tuple has the wrong number of paths");
    std::set<LatticePoint> seen;
    for (int j = 1; j <= p; ++j) {
        const Path& pj = paths[static_cast<std::size_t>(j - 1)];
        if (!(pj.start == LatticePoint{-m, -j}) || !(pj.end() == LatticePoint{p - j, -m - j}))
            throw std::logic_error("path endpoints violate the tuple convention");
        for (const auto& v : pj.vertices()) {
            if (!seen.insert(v).second)
                throw std::logic_error("paths intersect");
        }
        const auto vs = pj.vertices();
        for (std::size_t t = 0; t + 1 < vs.size(); ++t) {
            const char c = pj.steps[t];
            if (vs[t].x < 0 && c == 'V')
                throw std::logic_error("vertical step in the left part");
            if (vs[t].x >= 0 && c == 'D')
                throw std::logic_error("diagonal step in the right part");
        }
    }
}

std::vector<int> PathTuple::x_poly() const
{
    std::vector<int> out;
    for (const Path& pj : paths) {
        for (const auto& v : pj.vertices()) {
            if (v.x == 0) {
                out.push_back(-v.y);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> PathTuple::pi(int tau) const
{
    if (tau < 0 || tau > m)
        throw std::out_of_range("Pi index outside 0..m");
    if (tau == m)
        return x_poly();
    std::vector<int> out;
    for (const Path& pj : paths)
        for (const auto& v : pj.vertices())
            if (v.x == tau - m) {
                out.push_back(-v.y);
                break;
            }
    return out;
}

std::string PathTuple::key() const
{
    std::string k;
    for (const Path& pj : paths) {
        k += pj.steps;
        k += '|';
    }
    return k;
}

std::string set_key(const std::vector<int>& s)
{
    std::string k = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i)
            k += ',';
        k += std::to_string(s[i]);
    }
    return k + "}";
}

} // namespace gda
