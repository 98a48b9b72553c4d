#ifndef GDA_PATHS_HPP
#define GDA_PATHS_HPP

#include <string>
#include <vector>

namespace gda {

struct LatticePoint
{
    int x = 0;
    int y = 0;
    bool operator==(const LatticePoint& o) const { return x == o.x && y == o.y; }
    bool operator<(const LatticePoint& o) const { return x != o.x ? x < o.x : y < o.y; }
};

// Steps of the two-regime polymer digraph: 'H' = (x+1, y), 'D' = (x+1, y-1)
// (left part only), 'V' = (x, y-1) (right part only).
struct Path
{
    LatticePoint start;
    std::string steps;

    std::vector<LatticePoint> vertices() const;
    LatticePoint end() const;
};

// p nonintersecting paths; path j runs from (-m, -j) to (p-j, -m-j).
struct PathTuple
{
    int p = 0;
    int m = 0;
    std::vector<Path> paths;

    // Throws std::logic_error unless endpoints and disjointness hold.
    void check() const;

    // Negated y of the first vertex of each path on x = 0, sorted.
    std::vector<int> x_poly() const;

    // Pi(tau): negated y of each path at x = tau - m for tau < m; Pi(m) = x_poly.
    std::vector<int> pi(int tau) const;

    std::string key() const;
};

std::string set_key(const std::vector<int>& s);

} // namespace gda

#endif
