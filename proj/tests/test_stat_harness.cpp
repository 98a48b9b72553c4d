#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "gda/distributions.hpp"
#include "gda/io.hpp"
#include "gda/stats.hpp"
#include "gda/suite.hpp"

using namespace gda;

namespace {

Counts multinomial_counts(long n, const std::vector<double>& p, RngStream& rng)
{
    std::discrete_distribution<int> d(p.begin(), p.end());
    Counts c;
    for (long i = 0; i < n; ++i)
        ++c[std::to_string(d(rng.engine()))];
    return c;
}

} // namespace

TEST_CASE("total variation of counts")
{
    const Counts a{{"x", 3}, {"y", 7}};
    CHECK(two_sample_stats(a, a).tv == 0.0);
    CHECK(two_sample_stats(a, Counts{{"z", 5}}).tv == doctest::Approx(1.0));
    CHECK_THROWS_AS(two_sample_stats(a, Counts{}), std::invalid_argument);
    CHECK(empirical_law(std::map<int, long>{{1, 1}, {2, 3}}).at("2") == doctest::Approx(0.75));
}

TEST_CASE("bootstrap TV quantile is calibrated")
{
    RngStream rng(61);
    const std::vector<double> p{0.1, 0.2, 0.3, 0.25, 0.15};
    int pass = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const Counts a = multinomial_counts(10000, p, rng), b = multinomial_counts(10000, p, rng);
        const double q = bootstrap_tv_quantile(a, b, 0.999, 1000, rng);
        pass += two_sample_stats(a, b).tv < q;
    }
    CHECK(pass >= 990);
}

TEST_CASE("Kolmogorov-Smirnov basics")
{
    RngStream rng(62);
    std::vector<double> u(100000);
    for (auto& v : u)
        v = rng.uniform();
    CHECK(ks_one_sample("uniform", u, [](double t) { return t; }).pass);
    const boost::math::gamma_distribution<double> g3(3.0);
    std::vector<double> g(100000);
    for (auto& v : g)
        v = sample_gamma(rng, {2.0});
    const KsResult k = ks_statistic(g, [&](double t) { return boost::math::cdf(g3, t); });
    CHECK(k.d > 10 * k.crit_001);
    CHECK_THROWS_AS(ks_statistic({}, [](double t) { return t; }), std::invalid_argument);
    CHECK_THROWS_AS(ks_critical(0.01, 0), std::invalid_argument);
    CHECK(ks_critical(0.05, 1) == doctest::Approx(1.3581).epsilon(1e-4));
    CHECK(kolmogorov_sf(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("lattice KS with continuity correction")
{
    RngStream rng(63);
    std::binomial_distribution<long> bin(400, 0.5);
    std::vector<long> x(20000);
    for (auto& v : x)
        v = bin(rng.engine());
    const boost::math::normal_distribution<double> nd(200.0, 10.0);
    const KsResult k = ks_lattice(x, [&](double t) { return boost::math::cdf(nd, t); });
    CHECK(k.d < k.crit_001);
}

TEST_CASE("tests on null data pass at the configured level")
{
    RngStream rng(64);
    const int trials = 200;
    int ks_pass = 0, two_pass = 0, gof_pass = 0, ind_pass = 0;
    const boost::math::gamma_distribution<double> g(1.5);
    const std::vector<double> p{0.05, 0.15, 0.3, 0.3, 0.15, 0.05};
    std::map<std::string, double> law;
    for (std::size_t i = 0; i < p.size(); ++i)
        law[std::to_string(i)] = p[i];
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(2000), y(2000);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = sample_gamma(rng, {1.5});
            y[i] = sample_gamma(rng, {1.5});
        }
        ks_pass += ks_one_sample("ks", x, [&](double v) { return boost::math::cdf(g, std::max(v, 0.0)); }).pass;
        ind_pass += independence_suite("ind", x, y, 5.0, rng, 0).pass;
        const Counts a = multinomial_counts(5000, p, rng), b = multinomial_counts(5000, p, rng);
        two_pass += discrete_two_sample("two", a, b, 1.0).pass;
        gof_pass += goodness_of_fit(a, law).p_value > 1e-3;
    }
    CHECK(ks_pass >= 198);
    CHECK(two_pass >= 198);
    CHECK(gof_pass >= 198);
    CHECK(ind_pass >= 198);
}

TEST_CASE("correlation")
{
    RngStream rng(65);
    std::vector<double> x(50000), y(50000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = sample_gamma(rng, {2.0});
        y[i] = sample_gamma(rng, {0.5});
    }
    CHECK(std::abs(pearson(x, y)) < 4.0 / std::sqrt(50000.0));
    CHECK(pearson(x, x) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pearson({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("lognormal control reference and detection")
{
    // Monte Carlo oracle for the quadrature reference.
    RngStream rng(66);
    const long N = 2000000;
    double s = 0, ss = 0;
    for (long i = 0; i < N; ++i) {
        const double l = std::log(std::cosh(std::sqrt(2.0) * rng.normal() / 2.0));
        s += l;
        ss += l * l;
    }
    const double var = ss / N - (s / N) * (s / N);
    const double rho = var / (0.5 + var);
    CHECK(lognormal_reference_correlation() == doctest::Approx(rho).epsilon(5e-3));
    const TestReport r = check_lognormal_control(67, 100000);
    CHECK(r.pass);
}

TEST_CASE("free-energy formulas")
{
    ParamSet p;
    p.psi = IndexedSequence::constant(0.4);
    p.phi = IndexedSequence::constant(0.6);
    p.theta = IndexedSequence::constant(0.0);
    const FreeEnergyReport r = free_energy_formulas(p, 2, 1.0);
    CHECK(r.quenched_mean == doctest::Approx(-1.7316555).epsilon(1e-5));
    CHECK(r.quenched_mean == doctest::Approx(3 * boost::math::digamma(1.0)));
    CHECK(r.variance_formula == doctest::Approx(3 * boost::math::trigamma(1.0)));
    CHECK(r.variance_alt == doctest::Approx(4 * r.variance_formula));
    const FreeEnergyReport again = free_energy_formulas(p, 2, 1.0);
    CHECK(again.quenched_mean == r.quenched_mean);
    CHECK(again.variance_formula == r.variance_formula);
    CHECK_THROWS_AS(free_energy_formulas(p, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(free_energy_formulas(p, 2, 0.0), std::invalid_argument);
}

TEST_CASE("free-energy gap sandwich")
{
    RngStream rng(68);
    for (int s = 0; s < 20; ++s) {
        const int n = 2 + s % 5;
        const ParamSet p = random_params(n, rng);
        const double T = 0.1 + 3 * rng.uniform();
        const FreeEnergyReport r = free_energy_formulas(p, n, T);
        CHECK(r.gap_lower < r.gap_normalized);
        CHECK(r.gap_normalized < r.gap_upper);
    }
}

TEST_CASE("annealed free energy limit")
{
    const ParamSet p = ParamSet::homogeneous(0.7, 0.6);
    for (double T : {0.5, 1.0, 2.0})
        for (int n : {50, 200}) {
            const FreeEnergyReport r = free_energy_formulas(p, n, T);
            CHECK(std::abs(r.annealed / (double(n) * n) - 0.5 * T * std::log(T * 1.3)) < 2.0 / n);
        }
}

TEST_CASE("free-energy Monte Carlo at small size")
{
    RngStream rng(69);
    const ParamSet p = ParamSet::homogeneous(0.5, 0.5);
    const FreeEnergyReport r = free_energy_mc(p, 4, 1.0, 5000, rng);
    CHECK(std::abs(r.mean - r.quenched_mean) < 4 * std::sqrt(r.variance / 5000));
    CHECK(std::abs(r.variance / r.variance_formula - 1) < 0.1);
    CHECK_THROWS_AS(free_energy_mc(p, 4, 1.0, 10, rng), std::invalid_argument);
}

TEST_CASE("scaling exponent fit")
{
    const std::vector<double> ns{64, 128, 256, 512};
    std::vector<double> sp, flat;
    for (double n : ns) {
        sp.push_back(3.0 * std::pow(n, 2.0 / 3.0));
        flat.push_back(5.0);
    }
    CHECK(std::abs(scaling_exponent(ns, sp).slope - 2.0 / 3.0) < 0.02);
    CHECK(std::abs(scaling_exponent(ns, flat).slope) < 1e-12);
    CHECK_THROWS_AS(scaling_exponent({1, 2, 3}, {1, 2, 3}), std::invalid_argument);

    RngStream rng(70);
    std::vector<std::vector<double>> samples;
    for (double n : ns) {
        std::vector<double> s(4000);
        for (auto& v : s)
            v = std::pow(n, 0.5) * rng.normal();
        samples.push_back(s);
    }
    const ScalingFit f = scaling_exponent_bootstrap(ns, samples, 200, rng);
    CHECK(f.ci_low <= f.slope);
    CHECK(f.slope <= f.ci_high);
    CHECK(std::abs(f.slope - 0.5) < 0.05);
}

TEST_CASE("Gauss-Hermite quadrature")
{
    CHECK(normal_expectation([](double x) { return x * x; }, 1.0, 2.0) == doctest::Approx(5.0));
    CHECK(normal_expectation([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(0.5)));
    CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
}

TEST_CASE("suite config parsing and validation")
{
    const SuiteConfig c = suite_config_from_json(
        Json::parse(R"({"tests": ["vertical_slice"], "sizes": {"vertical_slice": [[3, 2]]}, "replicas": 10, "seed": 5})"));
    CHECK(c.tests == std::vector<std::string>{"vertical_slice"});
    CHECK(c.sizes.at("vertical_slice").front() == std::vector<int>{3, 2});
    CHECK(c.seed == 5);
    CHECK(suite_config_from_json(to_json(c)).replicas == 10);
    CHECK_THROWS_AS(suite_config_from_json(Json::parse(R"({"tests": ["nope"]})")), std::invalid_argument);
    CHECK_THROWS_AS(suite_config_from_json(Json::parse(R"({"bogus": 1})")), std::invalid_argument);
    CHECK_THROWS_AS(suite_config_from_json(Json::parse(R"({"sizes": {"vertical_slice": [[2, 3]]}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(suite_config_from_json(Json::parse(R"({"replicas": 0})")), std::invalid_argument);
    CHECK_THROWS_AS(suite_config_from_json(Json::parse(R"({"seed": -1})")), std::invalid_argument);
}

TEST_CASE("suite reports reproduce from their seeds")
{
    SuiteConfig c;
    c.tests = {"vertical_slice", "edge_gamma"};
    c.sizes = {{"vertical_slice", {{3, 2}}}, {"edge_gamma", {{3}}}};
    c.seed = 11;
    const auto a = match_suite(c), b = match_suite(c);
    CHECK(to_jsonl(a) == to_jsonl(b));
    REQUIRE(a.size() == 2);
    for (const auto& r : a) {
        CHECK(r.pass);
        REQUIRE(r.seeds.size() == 1);
    }
    CHECK(a[0].id < a[1].id);
    const TestReport again = check_edge_gamma(a[0].id.rfind("edge", 0) == 0 ? a[0].seeds[0] : a[1].seeds[0], 3);
    CHECK(to_json(again)["statistic"] == to_json(a[0].id.rfind("edge", 0) == 0 ? a[0] : a[1])["statistic"]);
}

TEST_CASE("report serialization")
{
    TestReport r;
    r.id = "x";
    r.statistic = 0.125;
    r.threshold = 0.5;
    r.sample_sizes = {10, 20};
    r.pass = true;
    r.seeds = {18446744073709551615ULL};
    r.detail = "ok";
    const std::string line = to_jsonl({r});
    CHECK(line.back() == '\n');
    const TestReport back = test_report_from_json(Json::parse(line));
    CHECK(back.seeds.front() == r.seeds.front());
    CHECK(back.statistic == r.statistic);
    CHECK(summary_csv({r}) == "id,statistic,threshold,pass\nx,0.125,0.5,1\n");
}
