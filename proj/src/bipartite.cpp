#include "gda/bipartite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace gda {

int BipartiteGraph::add_white(Point2 pos)
{
    white_pos_.push_back(pos);
    return n_white() - 1;
}

int BipartiteGraph::add_black(Point2 pos)
{
    black_pos_.push_back(pos);
    return n_black() - 1;
}

int BipartiteGraph::add_edge(int white, int black, double weight, int tag)
{
    if (white < 0 || white >= n_white() || black < 0 || black >= n_black())
        throw std::out_of_range("edge endpoint out of range");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw std::invalid_argument("edge weights must be positive and finite");
    if (index_.count({white, black}))
        throw std::invalid_argument("duplicate edge");
    edges_.push_back(Edge{white, black, weight, tag});
    const int e = static_cast<int>(edges_.size()) - 1;
    index_[{white, black}] = e;
    return e;
}

int BipartiteGraph::find_edge(int white, int black) const
{
    const auto it = index_.find({white, black});
    return it == index_.end() ? -1 : it->second;
}

std::vector<std::vector<int>> BipartiteGraph::white_incidence() const
{
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(n_white()));
    for (std::size_t e = 0; e < edges_.size(); ++e)
        inc[static_cast<std::size_t>(edges_[e].white)].push_back(static_cast<int>(e));
    return inc;
}

std::vector<std::vector<int>> BipartiteGraph::black_incidence() const
{
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(n_black()));
    for (std::size_t e = 0; e < edges_.size(); ++e)
        inc[static_cast<std::size_t>(edges_[e].black)].push_back(static_cast<int>(e));
    return inc;
}

int BipartiteGraph::connected_components() const
{
    // Union-find over whites [0, W) and blacks [W, W+B).
    const int nw = n_white();
    std::vector<int> parent(static_cast<std::size_t>(nw + n_black()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Edge& e : edges_)
        parent[find(e.white)] = find(nw + e.black);
    int count = 0;
    for (int v = 0; v < static_cast<int>(parent.size()); ++v)
        count += find(v) == v;
    return count;
}

double log_sum_exp(const std::vector<double>& v)
{
    if (v.empty())
        return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s);
}

ExactMeasure enumerate_matchings(const BipartiteGraph& g, int guard)
{
    const int nw = g.n_white();
    const int nb = g.n_black();
    if (nw > guard || nb > guard || nb > 64)
        throw std::invalid_argument("graph exceeds the enumeration size guard");
    if (nw != nb)
        throw NoPerfectMatching();

    const auto inc = g.white_incidence();
    std::vector<double> log_w(g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        log_w[e] = std::log(g.edges()[e].weight);

    ExactMeasure mu;
    std::vector<char> done(static_cast<std::size_t>(nw), 0);
    std::vector<int> chosen;
    std::uint64_t used = 0;

    std::function<void(int, double)> rec = [&](int depth, double lw) {
        if (depth == nw) {
            std::vector<int> edges = chosen;
            std::sort(edges.begin(), edges.end());
            mu.entries.push_back({std::move(edges), lw, 0.0});
            return;
        }
        // Most constrained white first.
        int best = -1;
        int best_count = std::numeric_limits<int>::max();
        for (int w = 0; w < nw; ++w) {
            if (done[w])
                continue;
            int c = 0;
            for (int e : inc[w])
                c += !((used >> g.edges()[e].black) & 1U);
            if (c < best_count) {
                best = w;
                best_count = c;
                if (c == 0)
                    return;
            }
        }
        done[best] = 1;
        for (int e : inc[best]) {
            const int b = g.edges()[e].black;
            if ((used >> b) & 1U)
                continue;
            used |= std::uint64_t{1} << b;
            chosen.push_back(e);
            rec(depth + 1, lw + log_w[e]);
            chosen.pop_back();
            used &= ~(std::uint64_t{1} << b);
        }
        done[best] = 0;
    };
    rec(0, 0.0);

    if (mu.entries.empty())
        throw NoPerfectMatching();
    std::vector<double> lws;
    for (const auto& e : mu.entries)
        lws.push_back(e.log_weight);
    mu.log_z = log_sum_exp(lws);
    for (auto& e : mu.entries)
        e.prob = std::exp(e.log_weight - mu.log_z);
    return mu;
}

double total_variation(const std::map<std::string, double>& p, const std::map<std::string, double>& q)
{
    double s = 0.0;
    for (const auto& [k, v] : p) {
        const auto it = q.find(k);
        s += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : q)
        if (!p.count(k))
            s += std::abs(v);
    return 0.5 * s;
}

BipartiteGraph aztec_graph(const WeightFieldd& w)
{
    if (!w.is_full())
        throw std::invalid_argument("aztec_graph needs a full level-n field");
    const int n = w.level;
    BipartiteGraph g;
    for (int l = 1; l <= n; ++l)
        for (int k = 1; k <= n + 1; ++k)
            g.add_white({double(2 * l - n), double(n + 2 - 2 * k)});
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j <= n; ++j)
            g.add_black({double(2 * i - n - 1), double(n + 1 - 2 * j)});
    auto wid = [n](int l, int k) { return (l - 1) * (n + 1) + (k - 1); };
    auto bid = [n](int i, int j) { return (i - 1) * n + (j - 1); };
    for (int l = 1; l <= n; ++l) {
        for (int k = 1; k <= n + 1; ++k) {
            if (k <= n) {
                g.add_edge(wid(l, k), bid(l, k), w.A(l, k), static_cast<int>(Dir::DL));
                g.add_edge(wid(l, k), bid(l + 1, k), 1.0, static_cast<int>(Dir::DR));
            }
            if (k >= 2) {
                g.add_edge(wid(l, k), bid(l, k - 1), w.B(l, k - 1), static_cast<int>(Dir::UL));
                g.add_edge(wid(l, k), bid(l + 1, k - 1), 1.0, static_cast<int>(Dir::UR));
            }
        }
    }
    return g;
}

Matching aztec_matching_from_edges(const BipartiteGraph& g, int n, const std::vector<int>& edges)
{
    Matching m(n);
    for (int e : edges) {
        const Edge& ed = g.edge(e);
        const int l = ed.white / (n + 1) + 1;
        const int k = ed.white % (n + 1) + 1;
        m(l, k) = static_cast<Dir>(ed.tag);
    }
    return m;
}

std::map<std::string, double> aztec_exact_law(const WeightFieldd& w, double* log_z)
{
    const BipartiteGraph g = aztec_graph(w);
    const ExactMeasure mu = enumerate_matchings(g);
    if (log_z)
        *log_z = mu.log_z;
    return pushforward(mu, [&](const std::vector<int>& e) {
        return aztec_matching_from_edges(g, w.level, e).key();
    });
}

namespace {

int edge_between(const BipartiteGraph& g, VertexRef p, VertexRef q)
{
    if (p.white == q.white)
        return -1;
    return p.white ? g.find_edge(p.id, q.id) : g.find_edge(q.id, p.id);
}

std::vector<int> incident(const BipartiteGraph& g, VertexRef v)
{
    std::vector<int> out;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Edge& ed = g.edges()[e];
        if ((v.white && ed.white == v.id) || (!v.white && ed.black == v.id))
            out.push_back(static_cast<int>(e));
    }
    return out;
}

VertexRef other_end(const BipartiteGraph& g, int e, VertexRef v)
{
    const Edge& ed = g.edge(e);
    return v.white ? VertexRef{false, ed.black} : VertexRef{true, ed.white};
}

bool same(VertexRef a, VertexRef b) { return a.white == b.white && a.id == b.id; }

} // namespace

SpiderResult spider_move(const BipartiteGraph& g, const SpiderSite& s)
{
    if (s.aa.white != s.dd.white || s.bb.white != s.cc.white || s.aa.white == s.bb.white)
        throw std::invalid_argument("spider site: AA,DD and BB,CC must have opposite colors");
    SpiderResult r;
    r.sq_w = edge_between(g, s.bb, s.aa);
    r.sq_x = edge_between(g, s.aa, s.cc);
    r.sq_y = edge_between(g, s.dd, s.bb);
    r.sq_z = edge_between(g, s.dd, s.cc);
    if (r.sq_w < 0 || r.sq_x < 0 || r.sq_y < 0 || r.sq_z < 0)
        throw std::invalid_argument("spider site: missing square edge");

    const std::array<VertexRef, 4> inner = {s.aa, s.bb, s.cc, s.dd};
    std::array<int, 4> legs{};
    std::array<VertexRef, 4> outer{};
    const std::set<int> square = {r.sq_w, r.sq_x, r.sq_y, r.sq_z};
    for (int t = 0; t < 4; ++t) {
        const auto inc = incident(g, inner[t]);
        std::vector<int> rest;
        for (int e : inc)
            if (!square.count(e))
                rest.push_back(e);
        if (inc.size() != 3 || rest.size() != 1)
            throw std::invalid_argument("spider site: inner vertices need exactly one leg");
        legs[t] = rest[0];
        outer[t] = other_end(g, rest[0], inner[t]);
        for (const auto& v : inner)
            if (same(v, outer[t]))
                throw std::invalid_argument("spider site: leg ends inside the square");
    }
    for (int t = 0; t < 4; ++t)
        for (int u = t + 1; u < 4; ++u)
            if (same(outer[t], outer[u]))
                throw std::invalid_argument("spider site: legs must reach distinct vertices");
    r.leg_a = legs[0];
    r.leg_b = legs[1];
    r.leg_c = legs[2];
    r.leg_d = legs[3];

    const double la = g.edge(legs[0]).weight, lb = g.edge(legs[1]).weight;
    const double lc = g.edge(legs[2]).weight, ld = g.edge(legs[3]).weight;
    r.w = g.edge(r.sq_w).weight / (la * lb);
    r.x = g.edge(r.sq_x).weight / (la * lc);
    r.y = g.edge(r.sq_y).weight / (ld * lb);
    r.z = g.edge(r.sq_z).weight / (ld * lc);
    const double d = r.w * r.z + r.x * r.y;
    r.log_factor = std::log(la * lb * lc * ld) + std::log(d);

    // Copy everything but the inner vertices.
    std::vector<int> wmap(static_cast<std::size_t>(g.n_white()), 0), bmap(static_cast<std::size_t>(g.n_black()), 0);
    for (const auto& v : inner)
        (v.white ? wmap : bmap)[static_cast<std::size_t>(v.id)] = -1;
    for (int w = 0; w < g.n_white(); ++w)
        if (wmap[w] >= 0)
            wmap[w] = r.graph.add_white(g.white_pos()[w]);
    for (int b = 0; b < g.n_black(); ++b)
        if (bmap[b] >= 0)
            bmap[b] = r.graph.add_black(g.black_pos()[b]);
    r.edge_map.assign(g.edges().size(), -1);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Edge& ed = g.edges()[e];
        if (wmap[ed.white] >= 0 && bmap[ed.black] >= 0)
            r.edge_map[e] = r.graph.add_edge(wmap[ed.white], bmap[ed.black], ed.weight, ed.tag);
    }
    auto connect = [&](VertexRef p, VertexRef q, double wt) {
        const VertexRef wv = p.white ? p : q;
        const VertexRef bv = p.white ? q : p;
        const int nwid = wmap[wv.id], nbid = bmap[bv.id];
        if (r.graph.find_edge(nwid, nbid) >= 0)
            throw std::invalid_argument("spider site: outer vertices already adjacent");
        return r.graph.add_edge(nwid, nbid, wt);
    };
    r.e_w = connect(outer[1], outer[0], r.z / d);
    r.e_x = connect(outer[0], outer[2], r.y / d);
    r.e_y = connect(outer[3], outer[1], r.x / d);
    r.e_z = connect(outer[3], outer[2], r.w / d);
    return r;
}

std::vector<std::pair<std::vector<int>, double>> spider_coupling(const SpiderResult& s,
                                                                 const std::vector<int>& edges)
{
    const std::set<int> in(edges.begin(), edges.end());
    std::vector<int> base;
    for (int e : edges)
        if (s.edge_map[e] >= 0)
            base.push_back(s.edge_map[e]);
    const bool la = in.count(s.leg_a), lb = in.count(s.leg_b), lc = in.count(s.leg_c), ld = in.count(s.leg_d);
    const int nlegs = la + lb + lc + ld;

    auto with = [&](std::initializer_list<int> extra) {
        std::vector<int> v = base;
        v.insert(v.end(), extra);
        std::sort(v.begin(), v.end());
        return v;
    };
    if (nlegs == 0)
        return {{with({}), 1.0}};
    if (nlegs == 4) {
        const double pw = s.w * s.z / (s.w * s.z + s.x * s.y);
        return {{with({s.e_w, s.e_z}), pw}, {with({s.e_x, s.e_y}), 1.0 - pw}};
    }
    if (nlegs != 2)
        throw std::logic_error("spider coupling: inconsistent local configuration");
    // The inner edge used fixes which outer pair needs a new edge.
    if (in.count(s.sq_w))
        return {{with({s.e_z}), 1.0}};
    if (in.count(s.sq_x))
        return {{with({s.e_y}), 1.0}};
    if (in.count(s.sq_y))
        return {{with({s.e_x}), 1.0}};
    if (in.count(s.sq_z))
        return {{with({s.e_w}), 1.0}};
    throw std::logic_error("spider coupling: two legs without an inner edge");
}

ExpandResult vertex_expand(const BipartiteGraph& g, VertexRef v, const std::vector<int>& moved)
{
    const std::set<int> mv(moved.begin(), moved.end());
    for (int e : mv) {
        const Edge& ed = g.edge(e);
        if ((v.white && ed.white != v.id) || (!v.white && ed.black != v.id))
            throw std::invalid_argument("moved edge is not incident to the expanded vertex");
    }
    ExpandResult r;
    for (const auto& p : g.white_pos())
        r.graph.add_white(p);
    for (const auto& p : g.black_pos())
        r.graph.add_black(p);
    const Point2 pos = v.white ? g.white_pos()[v.id] : g.black_pos()[v.id];
    r.v = v;
    if (v.white) {
        r.u = {false, r.graph.add_black(pos)};
        r.v2 = {true, r.graph.add_white(pos)};
    } else {
        r.u = {true, r.graph.add_white(pos)};
        r.v2 = {false, r.graph.add_black(pos)};
    }
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        Edge ed = g.edges()[e];
        if (mv.count(static_cast<int>(e)))
            (v.white ? ed.white : ed.black) = r.v2.id;
        r.edge_map.push_back(r.graph.add_edge(ed.white, ed.black, ed.weight, ed.tag));
    }
    if (v.white) {
        r.graph.add_edge(v.id, r.u.id, 1.0);
        r.graph.add_edge(r.v2.id, r.u.id, 1.0);
    } else {
        r.graph.add_edge(r.u.id, v.id, 1.0);
        r.graph.add_edge(r.u.id, r.v2.id, 1.0);
    }
    return r;
}

BipartiteGraph vertex_contract(const BipartiteGraph& g, VertexRef v, VertexRef u, VertexRef v2)
{
    if (v.white != v2.white || u.white == v.white)
        throw std::invalid_argument("contraction needs v, v2 of one color and u of the other");
    std::vector<int> wmap(static_cast<std::size_t>(g.n_white())), bmap(static_cast<std::size_t>(g.n_black()));
    BipartiteGraph out;
    for (int w = 0; w < g.n_white(); ++w) {
        const bool drop = (u.white && u.id == w) || (v2.white && v2.id == w);
        wmap[w] = drop ? -1 : out.add_white(g.white_pos()[w]);
    }
    for (int b = 0; b < g.n_black(); ++b) {
        const bool drop = (!u.white && u.id == b) || (!v2.white && v2.id == b);
        bmap[b] = drop ? -1 : out.add_black(g.black_pos()[b]);
    }
    for (const Edge& ed : g.edges()) {
        const VertexRef wv{true, ed.white}, bv{false, ed.black};
        if (same(wv, u) || same(bv, u))
            continue;
        int w = ed.white, b = ed.black;
        if (same(wv, v2))
            w = v.id;
        if (same(bv, v2))
            b = v.id;
        out.add_edge(wmap[w], bmap[b], ed.weight, ed.tag);
    }
    return out;
}

Conditioned condition_on_edges(const BipartiteGraph& g, const std::vector<int>& fixed)
{
    Conditioned c;
    std::vector<char> wdrop(static_cast<std::size_t>(g.n_white()), 0), bdrop(static_cast<std::size_t>(g.n_black()), 0);
    for (int e : fixed) {
        const Edge& ed = g.edge(e);
        if (wdrop[ed.white] || bdrop[ed.black])
            throw std::invalid_argument("fixed edges share a vertex");
        wdrop[ed.white] = bdrop[ed.black] = 1;
        c.log_fixed_weight += std::log(ed.weight);
    }
    c.white_map.assign(static_cast<std::size_t>(g.n_white()), -1);
    c.black_map.assign(static_cast<std::size_t>(g.n_black()), -1);
    for (int w = 0; w < g.n_white(); ++w)
        if (!wdrop[w])
            c.white_map[w] = c.graph.add_white(g.white_pos()[w]);
    for (int b = 0; b < g.n_black(); ++b)
        if (!bdrop[b])
            c.black_map[b] = c.graph.add_black(g.black_pos()[b]);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Edge& ed = g.edges()[e];
        if (c.white_map[ed.white] >= 0 && c.black_map[ed.black] >= 0) {
            c.graph.add_edge(c.white_map[ed.white], c.black_map[ed.black], ed.weight, ed.tag);
            c.new_to_old.push_back(static_cast<int>(e));
        }
    }
    return c;
}

} // namespace gda
