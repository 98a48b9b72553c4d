#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <regex>
#include <string>

#include "gda/aztec.hpp"
#include "gda/bipartite.hpp"
#include "gda/io.hpp"
#include "gda/render.hpp"

using namespace gda;

namespace {

const char* fig1_text = "aztec n=3\nLDUU\nLRLR\nDLRR\n";

Matching fig1()
{
    return matching_from_text(fig1_text);
}

int count(const std::string& s, const std::string& needle)
{
    int c = 0;
    for (std::size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1))
        ++c;
    return c;
}

double tv(const std::map<std::string, double>& p, const std::map<std::string, double>& q)
{
    return total_variation(p, q);
}

} // namespace

TEST_CASE("direction characters")
{
    CHECK(dir_char(Dir::DL) == 'L');
    CHECK(dir_char(Dir::UL) == 'U');
    CHECK(dir_char(Dir::UR) == 'R');
    CHECK(dir_char(Dir::DR) == 'D');
    CHECK(dir_from_char('R') == Dir::UR);
    CHECK_THROWS_AS(dir_from_char('x'), std::invalid_argument);
}

TEST_CASE("matching weight")
{
    RngStream rng(31);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(1.0, 1.0), 3, rng);
    const double expect = std::log(w.A(1, 1) * w.A(2, 1) * w.A(2, 3) * w.A(3, 2) * w.B(1, 2) * w.B(1, 3));
    CHECK(matching_weight(fig1(), w) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(matching_weight(fig1(), WeightFieldd::constant(3, 1.0, 1.0)) == 0.0);
    const WeightFieldd w1 = sample_weight_field(ParamSet::homogeneous(1.0, 1.0), 1, rng);
    CHECK(matching_weight(matching_from_text("aztec n=1\nLR\n"), w1) == doctest::Approx(std::log(w1.A(1, 1))));
}

TEST_CASE("matching validity")
{
    CHECK(validate(fig1()));
    CHECK_FALSE(validate(matching_from_text("aztec n=2\nLLL\nLLL\n")));
    // w(1,1) and w(1,2) both reach bk(1,1).
    CHECK_FALSE(validate(matching_from_text("aztec n=1\nLU\n")));
}

TEST_CASE("turning points")
{
    const TurningPoints t = turning_points(fig1());
    CHECK(t.north == 2);
    CHECK(t.east == 1);
    CHECK(t.south == 1);
    CHECK(t.west == 1);
    const TurningPoints a = turning_points(matching_from_text("aztec n=1\nLR\n"));
    CHECK((a.north == 1 && a.east == 0 && a.south == 0 && a.west == 1));
    const TurningPoints b = turning_points(matching_from_text("aztec n=1\nDU\n"));
    CHECK((b.north == 0 && b.east == 1 && b.south == 1 && b.west == 0));
}

TEST_CASE("slices")
{
    const Matching m = fig1();
    const TurningPoints t = turning_points(m);
    CHECK(vertical_slice(m, 1) == SliceSet{1, 3, 4});
    CHECK(vertical_slice(m, 3) == SliceSet{t.east + 1});
    CHECK(horizontal_slice(m, 1) == SliceSet{1, 2, 4});
    CHECK(horizontal_slice(matching_from_text("aztec n=1\nLR\n"), 1) == SliceSet{1});
}

TEST_CASE("exhaustive counts and slice cardinalities")
{
    CHECK(aztec_exact_law(WeightFieldd::constant(2, 1.0, 1.0)).size() == 8);
    const auto law3 = aztec_exact_law(WeightFieldd::constant(3, 1.0, 1.0));
    CHECK(law3.size() == 64);
    for (const auto& kv : law3) {
        CHECK(kv.second == doctest::Approx(1.0 / 64));
        std::string text = "aztec n=3\n" + kv.first.substr(0, 4) + "\n" + kv.first.substr(4, 4) + "\n"
                           + kv.first.substr(8, 4) + "\n";
        const Matching m = matching_from_text(text);
        CHECK(validate(m));
        for (int l = 1; l <= 3; ++l)
            CHECK(horizontal_slice(m, l).size() == static_cast<std::size_t>(4 - l));
        const TurningPoints t = turning_points(m);
        SliceSet west;
        for (int k = 1; k <= 4; ++k)
            if (k != t.west + 1)
                west.push_back(k);
        CHECK(vertical_slice(m, 1) == west);
    }
}

TEST_CASE("Fig. 1 matching probability")
{
    RngStream rng(32);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.7, 1.3), 3, rng);
    double log_z = 0;
    const auto law = aztec_exact_law(w, &log_z);
    const double p = std::exp(std::log(w.A(1, 1) * w.A(2, 1) * w.A(2, 3) * w.A(3, 2) * w.B(1, 2) * w.B(1, 3)) - log_z);
    CHECK(law.at(fig1().key()) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("destruction and slide on the Fig. 1 matching")
{
    const SlideResult s = destroy_and_slide(fig1());
    CHECK(s.destroyed_pairs == 1);
    CHECK(s.partial.n() == 4);
    CHECK(s.empty_faces.size() == 5);
}

TEST_CASE("creation from the empty matching")
{
    const WeightFieldd w(1, Grid<double>::Constant(1, 1, 2.0), Grid<double>::Constant(1, 1, 3.0));
    const auto succ = shuffle_transition_distribution(Matching(0), w);
    REQUIRE(succ.size() == 2);
    std::map<std::string, double> law;
    for (const auto& [m, p] : succ)
        law[m.key()] = p;
    CHECK(law.at("LR") == doctest::Approx(0.4));
    CHECK(law.at("DU") == doctest::Approx(0.6));

    RngStream rng(33);
    const long N = 100000;
    long nw = 0;
    for (long r = 0; r < N; ++r)
        nw += shuffle_step(Matching(0), w, rng).key() == "LR";
    CHECK(std::abs(static_cast<double>(nw) / N - 0.4) < 4 * std::sqrt(0.24 / N));
}

TEST_CASE("exact transition pushes the level-1 measure to the level-2 measure")
{
    RngStream rng(34);
    const Cascaded c(sample_weight_field(ParamSet::homogeneous(0.9, 1.6), 3, rng));
    for (int k = 1; k < 3; ++k) {
        std::map<std::string, double> pushed;
        const auto lower = aztec_exact_law(c.level(k));
        for (const auto& [key, p] : lower) {
            std::string text = "aztec n=" + std::to_string(k) + "\n";
            for (int l = 0; l < k; ++l)
                text += key.substr(static_cast<std::size_t>(l * (k + 1)), static_cast<std::size_t>(k + 1)) + "\n";
            const auto succ = shuffle_transition_distribution(matching_from_text(text), c.level(k + 1));
            double total = 0;
            for (const auto& [m, q] : succ) {
                pushed[m.key()] += p * q;
                total += q;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(tv(pushed, aztec_exact_law(c.level(k + 1))) < 1e-10);
    }
}

TEST_CASE("shuffle with a fixed chooser is deterministic")
{
    RngStream rng(35);
    const Cascaded c(sample_weight_field(ParamSet::homogeneous(1.0, 1.0), 5, rng));
    const FaceChooser always = [](int, int, double) { return true; };
    Matching m1(0), m2(0);
    for (int k = 1; k <= 5; ++k) {
        m1 = shuffle_step(m1, c.level(k), always);
        m2 = shuffle_step(m2, c.level(k), always);
        CHECK(m1 == m2);
        CHECK(validate(m1));
    }
}

TEST_CASE("low-memory sampler reproduces the cascade sampler")
{
    RngStream wr(36);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.2, 0.25), 30, wr);
    RngStream r1(37), r2(37);
    const Matching a = sample_matching(Cascaded(w), r1);
    const Matching b = sample_matching_low_memory(w, r2);
    CHECK(a == b);
    CHECK(validate(b));
}

TEST_CASE("sampled trajectories are valid at every level")
{
    RngStream rng(38);
    const Trajectory t = sample_trajectory(ParamSet::homogeneous(0.5, 0.5), 12, rng);
    REQUIRE(t.matchings.size() == 12);
    for (std::size_t k = 0; k < t.matchings.size(); ++k) {
        CHECK(t.matchings[k].n() == static_cast<int>(k + 1));
        CHECK(validate(t.matchings[k]));
    }
}

TEST_CASE("text and JSON serialization")
{
    CHECK(to_text(fig1()) == fig1_text);
    CHECK(matching_from_text(to_text(fig1())) == fig1());
    const Json j = to_json(fig1());
    CHECK(j["rows"][1] == "LRLR");
    CHECK(matching_from_json(j) == fig1());
    CHECK_THROWS_AS(matching_from_text("aztec n=3\nLDUU\n"), std::invalid_argument);
    CHECK_THROWS_AS(matching_from_text("diamond 3\n"), std::invalid_argument);
}

TEST_CASE("SVG rendering")
{
    const std::string one = render_svg(matching_from_text("aztec n=1\nLR\n"));
    CHECK(count(one, "<line") == 2);
    CHECK(count(one, "#D62728") == 1);
    CHECK(count(one, "#1F77B4") == 1);

    const std::string svg = render_svg(fig1());
    CHECK(count(svg, "<line") == 12);
    CHECK(count(svg, "#D62728") == 4);
    CHECK(count(svg, "#FFD700") == 2);
    CHECK(count(svg, "#2CA02C") == 2);
    CHECK(count(svg, "#1F77B4") == 4);
    CHECK(svg.find("viewBox=\"-20 -30 60 60\"") != std::string::npos);

    CHECK(count(render_double_dimer_svg(fig1(), fig1()), "<line") == 0);
    CHECK_THROWS_AS(render_double_dimer_svg(fig1(), matching_from_text("aztec n=1\nLR\n")), std::invalid_argument);
}
