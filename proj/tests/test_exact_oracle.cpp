#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gda/bipartite.hpp"
#include "gda/column_graph.hpp"
#include "gda/io.hpp"
#include "gda/polymer.hpp"

using namespace gda;

namespace {

// Square AA-BB-DD-CC with whites AA, DD and blacks BB, CC, plus one unit leg per vertex.
struct SquareGraph
{
    BipartiteGraph g;
    SpiderSite site;
};

SquareGraph square(double w, double x, double y, double z)
{
    SquareGraph s;
    const int aa = s.g.add_white(), dd = s.g.add_white(), lb = s.g.add_white(), lc = s.g.add_white();
    const int bb = s.g.add_black(), cc = s.g.add_black(), la = s.g.add_black(), ld = s.g.add_black();
    s.g.add_edge(aa, bb, w);
    s.g.add_edge(aa, cc, x);
    s.g.add_edge(dd, bb, y);
    s.g.add_edge(dd, cc, z);
    s.g.add_edge(aa, la, 1.0);
    s.g.add_edge(dd, ld, 1.0);
    s.g.add_edge(lb, bb, 1.0);
    s.g.add_edge(lc, cc, 1.0);
    s.site = {{true, aa}, {false, bb}, {false, cc}, {true, dd}};
    return s;
}

// Brute-force permanent over all bijections; independent of the enumerator.
double brute_z(const BipartiteGraph& g)
{
    std::vector<int> perm(static_cast<std::size_t>(g.n_black()));
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = static_cast<int>(i);
    double z = 0;
    do {
        double p = 1;
        for (int wv = 0; wv < g.n_white() && p > 0; ++wv) {
            const int e = g.find_edge(wv, perm[static_cast<std::size_t>(wv)]);
            p = e < 0 ? 0.0 : p * g.edge(e).weight;
        }
        z += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return z;
}

double path_log_weight(const PolymerWeights& w, const PathTuple& t)
{
    double s = 0;
    for (const auto& path : t.paths) {
        LatticePoint v = path.start;
        for (char c : path.steps) {
            s += std::log(w.step_weight(v.x, v.y, c));
            if (c == 'H')
                ++v.x;
            else if (c == 'D') {
                ++v.x;
                --v.y;
            } else
                --v.y;
        }
    }
    return s;
}

} // namespace

TEST_CASE("Aztec graph shape")
{
    for (int n = 1; n <= 4; ++n) {
        const BipartiteGraph g = aztec_graph(WeightFieldd::constant(n, 1.0, 1.0));
        CHECK(g.n_white() == n * (n + 1));
        CHECK(g.n_black() == n * (n + 1));
        CHECK(static_cast<int>(g.edges().size()) == 4 * n * n);
    }
    CHECK(aztec_graph(WeightFieldd::constant(1, 1.0, 1.0)).n_white() + 2 == 4);
}

TEST_CASE("order-1 exact measure")
{
    const WeightFieldd w(1, Grid<double>::Constant(1, 1, 2.0), Grid<double>::Constant(1, 1, 5.0));
    const ExactMeasure mu = enumerate_matchings(aztec_graph(w));
    REQUIRE(mu.entries.size() == 2);
    std::set<double> probs;
    for (const auto& e : mu.entries)
        probs.insert(std::round(e.prob * 1e12) / 1e12);
    CHECK(probs == std::set<double>{std::round(2.0 / 7 * 1e12) / 1e12, std::round(5.0 / 7 * 1e12) / 1e12});
    CHECK(mu.log_z == doctest::Approx(std::log(7.0)));
}

TEST_CASE("unit-weight matching counts")
{
    CHECK(enumerate_matchings(aztec_graph(WeightFieldd::constant(2, 1.0, 1.0))).entries.size() == 8);
    const ExactMeasure mu = enumerate_matchings(aztec_graph(WeightFieldd::constant(3, 1.0, 1.0)));
    CHECK(mu.entries.size() == 64);
    CHECK(mu.log_z == doctest::Approx(6 * std::log(2.0)));
}

TEST_CASE("enumeration agrees with a brute-force permanent")
{
    RngStream rng(41);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.8, 1.2), 2, rng);
    const BipartiteGraph g = aztec_graph(w);
    CHECK(enumerate_matchings(g).log_z == doctest::Approx(std::log(brute_z(g))).epsilon(1e-12));
    BipartiteGraph bad;
    bad.add_white();
    bad.add_black();
    bad.add_black();
    CHECK_THROWS_AS(enumerate_matchings(bad), NoPerfectMatching);
    BipartiteGraph dup;
    dup.add_white();
    dup.add_black();
    dup.add_edge(0, 0, 1.0);
    CHECK_THROWS_AS(dup.add_edge(0, 0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(dup.add_edge(0, 0, -1.0), std::invalid_argument);
}

TEST_CASE("total variation trivia")
{
    const std::map<std::string, double> p{{"a", 0.5}, {"b", 0.5}}, q{{"c", 1.0}};
    CHECK(total_variation(p, p) == 0.0);
    CHECK(total_variation(p, q) == doctest::Approx(1.0));
}

TEST_CASE("spider move on a unit square")
{
    const SquareGraph s = square(1, 1, 1, 1);
    const SpiderResult r = spider_move(s.g, s.site);
    CHECK(r.graph.edge(r.e_w).weight == doctest::Approx(0.5));
    CHECK(r.graph.edge(r.e_x).weight == doctest::Approx(0.5));
    CHECK(r.graph.edge(r.e_y).weight == doctest::Approx(0.5));
    CHECK(r.graph.edge(r.e_z).weight == doctest::Approx(0.5));
    CHECK(std::exp(r.log_factor) == doctest::Approx(2.0));
    CHECK(std::log(brute_z(s.g)) - std::log(brute_z(r.graph)) == doctest::Approx(r.log_factor));
}

TEST_CASE("spider move with weights (2, 1, 1, 3)")
{
    const SquareGraph s = square(2, 1, 1, 3);
    const SpiderResult r = spider_move(s.g, s.site);
    CHECK(r.graph.edge(r.e_w).weight == doctest::Approx(3.0 / 7));
    CHECK(r.graph.edge(r.e_x).weight == doctest::Approx(1.0 / 7));
    CHECK(r.graph.edge(r.e_y).weight == doctest::Approx(1.0 / 7));
    CHECK(r.graph.edge(r.e_z).weight == doctest::Approx(2.0 / 7));
    CHECK(std::exp(r.log_factor) == doctest::Approx(7.0));
    CHECK(std::log(brute_z(s.g)) - std::log(brute_z(r.graph)) == doctest::Approx(r.log_factor));
}

TEST_CASE("spider coupling pushes the G measure to the G' measure")
{
    const SquareGraph s = square(0.7, 1.9, 2.3, 0.4);
    const SpiderResult r = spider_move(s.g, s.site);
    const ExactMeasure mu = enumerate_matchings(s.g), nu = enumerate_matchings(r.graph);
    std::map<std::string, double> pushed, target;
    auto key = [](const std::vector<int>& es) {
        std::string k;
        for (int e : es)
            k += std::to_string(e) + ",";
        return k;
    };
    for (const auto& en : mu.entries)
        for (const auto& [es, p] : spider_coupling(r, en.edges))
            pushed[key(es)] += en.prob * p;
    for (const auto& en : nu.entries)
        target[key(en.edges)] += en.prob;
    CHECK(total_variation(pushed, target) < 1e-12);
}

TEST_CASE("vertex expansion and contraction")
{
    RngStream rng(42);
    for (int t = 0; t < 10; ++t) {
        const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(1.0, 1.0), 2, rng);
        const BipartiteGraph g = aztec_graph(w);
        const VertexRef v{t % 2 == 0, t % g.n_white()};
        const auto inc = v.white ? g.white_incidence()[v.id] : g.black_incidence()[v.id];
        const std::vector<int> moved(inc.begin(), inc.begin() + static_cast<long>(inc.size() / 2));
        const ExpandResult x = vertex_expand(g, v, moved);
        const ExactMeasure a = enumerate_matchings(g), b = enumerate_matchings(x.graph);
        CHECK(std::abs(a.log_z - b.log_z) < 1e-12);
        CHECK(a.entries.size() == b.entries.size());
        const BipartiteGraph back = vertex_contract(x.graph, x.v, x.u, x.v2);
        CHECK(back.n_white() == g.n_white());
        CHECK(back.n_black() == g.n_black());
        REQUIRE(back.edges().size() == g.edges().size());
        for (const auto& e : g.edges()) {
            const int f = back.find_edge(e.white, e.black);
            REQUIRE(f >= 0);
            CHECK(back.edge(f).weight == doctest::Approx(e.weight));
        }
    }
}

TEST_CASE("vertical column presentation has the Aztec measure")
{
    RngStream rng(43);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.6, 1.1), 3, rng);
    const ColumnGraph cg = build_vertical(w);
    const ExactMeasure mu = enumerate_matchings(cg.graph);
    double log_z = 0;
    const auto law = aztec_exact_law(w, &log_z);
    std::map<std::string, double> pushed;
    for (const auto& en : mu.entries)
        pushed[vertical_to_aztec(cg, 3, en.edges).key()] += en.prob;
    CHECK(total_variation(pushed, law) < 1e-12);
}

TEST_CASE("swap graph at l = n + 1 has one matching of weight Z")
{
    RngStream rng(44);
    for (int n = 1; n <= 3; ++n) {
        const Cascaded c(sample_weight_field(ParamSet::homogeneous(1.2, 0.9), n, rng));
        const ExactMeasure mu = enumerate_matchings(build_vswap(c, n, n + 1).graph);
        REQUIRE(mu.entries.size() == 1);
        CHECK(mu.entries.front().log_weight == doctest::Approx(partition_product(c)).epsilon(1e-12));
    }
}

TEST_CASE("swap graph at n = 2, l = 3 splits in two components")
{
    RngStream rng(45);
    const Cascaded c(sample_weight_field(ParamSet::homogeneous(1.0, 1.0), 2, rng));
    const ColumnGraph cg = build_vswap(c, 2, 3);
    CHECK(cg.graph.connected_components() == 2);
    CHECK(enumerate_matchings(cg.graph).entries.size() == 1);
}

TEST_CASE("dimer to path bijection at n = 3, l = 2")
{
    RngStream rng(46);
    const int n = 3, l = 2;
    const Cascaded c(sample_weight_field(ParamSet::homogeneous(0.9, 1.3), n, rng));
    const TrimmedGraph t = trim_swap_graph(build_vswap(c, n, l), n, l);
    const ExactMeasure mu = enumerate_matchings(t.cond.graph);
    const PolymerWeights pw = bg_weights_from_cascade(c, n, l);
    std::set<std::string> seen;
    double offset = 0;
    bool first = true;
    for (const auto& en : mu.entries) {
        const PathTuple paths = dimer_to_paths(t, en.edges);
        CHECK_NOTHROW(paths.check());
        std::vector<int> back = paths_to_dimer(t, paths);
        std::sort(back.begin(), back.end());
        CHECK(back == en.edges);
        seen.insert(paths.key());
        const double d = en.log_weight - path_log_weight(pw, paths);
        if (first)
            offset = d;
        first = false;
        CHECK(d == doctest::Approx(offset).epsilon(1e-12));
    }
    CHECK(seen.size() == mu.entries.size());
    CHECK(seen.size() == bg_polymer_exact(pw).entries.size());
}

TEST_CASE("graph JSON round trip")
{
    const BipartiteGraph g = aztec_graph(WeightFieldd::constant(2, 0.5, 2.0));
    const Json j = to_json(g);
    CHECK(j["edges"].size() == 16);
    CHECK(j["edges"][0].size() == 3);
    const BipartiteGraph h = graph_from_json(Json::parse(j.dump()));
    CHECK(h.n_white() == g.n_white());
    CHECK(enumerate_matchings(h).log_z == doctest::Approx(enumerate_matchings(g).log_z));
    CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"white": [[0,0]], "black": [], "edges": [[0, 0, 1]]})")),
                    std::invalid_argument);
}
