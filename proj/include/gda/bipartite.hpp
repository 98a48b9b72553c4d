#ifndef GDA_BIPARTITE_HPP
#define GDA_BIPARTITE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gda/aztec.hpp"
#include "gda/weights.hpp"

namespace gda {

struct Edge
{
    int white;
    int black;
    double weight;
    int tag = 0;
};

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

class BipartiteGraph
{
    public:
        int add_white(Point2 pos = {});
        int add_black(Point2 pos = {});
        // Rejects duplicate edges and nonpositive weights.
        int add_edge(int white, int black, double weight, int tag = 0);

        int n_white() const { return static_cast<int>(white_pos_.size()); }
        int n_black() const { return static_cast<int>(black_pos_.size()); }
        const std::vector<Edge>& edges() const { return edges_; }
        std::vector<Edge>& edges() { return edges_; }
        const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
        int find_edge(int white, int black) const;  // -1 if absent

        const std::vector<Point2>& white_pos() const { return white_pos_; }
        const std::vector<Point2>& black_pos() const { return black_pos_; }

        std::vector<std::vector<int>> white_incidence() const;
        std::vector<std::vector<int>> black_incidence() const;
        int connected_components() const;

    private:
        std::vector<Point2> white_pos_;
        std::vector<Point2> black_pos_;
        std::vector<Edge> edges_;
        std::map<std::pair<int, int>, int> index_;
};

class NoPerfectMatching : public std::runtime_error
{
    public:
        NoPerfectMatching() : std::runtime_error("graph has no perfect matching") {}
};

// Exact dimer measure. Each matching is the sorted list of its edge indices.
struct ExactMeasure
{
    struct Entry
    {
        std::vector<int> edges;
        double log_weight;
        double prob;
    };
    std::vector<Entry> entries;
    double log_z = 0.0;
};

constexpr int enumeration_guard = 48;

ExactMeasure enumerate_matchings(const BipartiteGraph& g, int guard = enumeration_guard);

double log_sum_exp(const std::vector<double>& v);

// Law of f(matching) under an exact measure.
template <typename F>
std::map<std::string, double> pushforward(const ExactMeasure& mu, F&& f)
{
    std::map<std::string, double> out;
    for (const auto& e : mu.entries)
        out[f(e.edges)] += e.prob;
    return out;
}

double total_variation(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

// Aztec diamond with whites w(l,k) -> id (l-1)(n+1)+(k-1) and blacks
// bk(i,j) -> id (i-1)n+(j-1). Edge tags hold the Dir seen from the white.
BipartiteGraph aztec_graph(const WeightFieldd& w);
Matching aztec_matching_from_edges(const BipartiteGraph& g, int n, const std::vector<int>& edges);

// Exact dimer measure on the Aztec diamond keyed by Matching::key().
std::map<std::string, double> aztec_exact_law(const WeightFieldd& w, double* log_z = nullptr);

struct VertexRef
{
    bool white;
    int id;
};

// Inner square of a spider move: AA top, BB left, CC right, DD bottom,
// with AA and DD of one color. Square edges w = BB-AA, x = AA-CC,
// y = DD-BB, z = DD-CC; each inner vertex has one further leg edge.
struct SpiderSite
{
    VertexRef aa, bb, cc, dd;
};

struct SpiderResult
{
    BipartiteGraph graph;
    double log_factor = 0.0;       // log Z_G - log Z_G'
    std::vector<int> edge_map;     // old edge -> new edge, or -1
    int e_w = -1, e_x = -1, e_y = -1, e_z = -1;      // new edges B-A, A-C, D-B, D-C
    int sq_w = -1, sq_x = -1, sq_y = -1, sq_z = -1;  // old square edges
    int leg_a = -1, leg_b = -1, leg_c = -1, leg_d = -1;
    double w = 0, x = 0, y = 0, z = 0;               // gauged square weights
};

SpiderResult spider_move(const BipartiteGraph& g, const SpiderSite& site);

// Conditional law of the G' matching given a G matching.
std::vector<std::pair<std::vector<int>, double>> spider_coupling(const SpiderResult& s,
                                                                 const std::vector<int>& edges);

struct ExpandResult
{
    BipartiteGraph graph;
    VertexRef v, u, v2;          // v keeps S, v2 takes S', u joins them
    std::vector<int> edge_map;   // old edge -> new edge
};

ExpandResult vertex_expand(const BipartiteGraph& g, VertexRef v, const std::vector<int>& moved_edges);
BipartiteGraph vertex_contract(const BipartiteGraph& g, VertexRef v, VertexRef u, VertexRef v2);

// Graph obtained by fixing the given edges and deleting their endpoints.
struct Conditioned
{
    BipartiteGraph graph;
    std::vector<int> new_to_old;   // edge index map
    std::vector<int> white_map;    // old white -> new (or -1)
    std::vector<int> black_map;
    double log_fixed_weight = 0.0;
};
Conditioned condition_on_edges(const BipartiteGraph& g, const std::vector<int>& fixed);

} // namespace gda

#endif
