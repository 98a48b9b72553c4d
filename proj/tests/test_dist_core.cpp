#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "gda/distributions.hpp"
#include "gda/rng.hpp"
#include "gda/stats.hpp"

using namespace gda;

namespace {

struct Moments
{
    double mean = 0, var = 0;
};

Moments moments(const std::vector<double>& x)
{
    Moments m;
    for (double v : x)
        m.mean += v;
    m.mean /= static_cast<double>(x.size());
    for (double v : x)
        m.var += (v - m.mean) * (v - m.mean);
    m.var /= static_cast<double>(x.size() - 1);
    return m;
}

bool within_se(const std::vector<double>& x, double target, double k = 4.0)
{
    const Moments m = moments(x);
    return std::abs(m.mean - target) < k * std::sqrt(m.var / static_cast<double>(x.size()));
}

} // namespace

TEST_CASE("rng streams are reproducible and distinct")
{
    RngStream a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    RngStream s1 = RngStream(7).substream(2), s2 = RngStream(7).substream(2);
    CHECK(s1.next_u64() == s2.next_u64());
    RngStream u(1);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("gamma sampler moments and tails")
{
    RngStream rng(11);
    std::vector<double> x(1000000);
    for (auto& v : x)
        v = sample_gamma(rng, {2.0, 3.0});
    CHECK(within_se(x, 6.0));

    std::vector<double> tail(1000000);
    for (auto& v : tail)
        v = sample_gamma(rng, {1.0, 1.0}) > 1.0 ? 1.0 : 0.0;
    CHECK(within_se(tail, std::exp(-1.0)));
}

TEST_CASE("small-shape gamma stays positive and matches inverse-CDF quantiles")
{
    RngStream rng(12);
    const boost::math::gamma_distribution<double> g(0.2, 1.0);
    std::vector<double> x(1000000);
    for (auto& v : x) {
        v = sample_gamma(rng, {0.2, 1.0});
        REQUIRE(v > 0.0);
    }
    std::sort(x.begin(), x.end());
    for (int q = 1; q <= 10; ++q) {
        const double p = q / 11.0;
        const double oracle = boost::math::quantile(g, p);
        const double emp = x[static_cast<std::size_t>(p * static_cast<double>(x.size()))];
        // Empirical CDF at the oracle quantile within 4 binomial SE.
        const double f = boost::math::cdf(g, emp);
        CHECK(std::abs(f - p) < 4.0 * std::sqrt(p * (1 - p) / static_cast<double>(x.size())) + 1e-6);
        CHECK(oracle > 0.0);
    }
}

TEST_CASE("log-gamma sampler handles tiny shapes")
{
    RngStream rng(13);
    for (int i = 0; i < 1000; ++i)
        CHECK(std::isfinite(sample_log_gamma(rng, {1e-4, 1.0})));
    CHECK_THROWS_AS(GammaParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GammaParams(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("beta sampler")
{
    RngStream rng(14);
    std::vector<double> u(1000000);
    for (auto& v : u)
        v = sample_beta(rng, {1.0, 1.0});
    const KsResult k = ks_statistic(u, [](double t) { return std::clamp(t, 0.0, 1.0); });
    CHECK(k.d < 0.005);

    std::vector<double> m(1000000);
    for (auto& v : m)
        v = sample_beta(rng, {2.0, 3.0});
    CHECK(within_se(m, 0.4));

    const boost::math::beta_distribution<double> bd(0.2, 0.25);
    std::vector<double> s(200000);
    for (auto& v : s) {
        v = sample_beta(rng, {0.2, 0.25});
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
    CHECK(ks_statistic(s, [&bd](double t) { return boost::math::cdf(bd, t); }).d < ks_critical(1e-3, 200000));
    CHECK_THROWS_AS(BetaParams(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("polygamma against the Boost oracle")
{
    CHECK(digamma(2.0) == doctest::Approx(0.4227843351).epsilon(1e-10));
    CHECK(trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-10));
    for (double x : {0.01, 0.1, 0.5, 1.0, 7.5, 100.0, 1e4}) {
        CHECK(polygamma(0, x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-12));
        CHECK(polygamma(1, x) == doctest::Approx(boost::math::trigamma(x)).epsilon(1e-12));
        CHECK(polygamma(2, x) == doctest::Approx(boost::math::polygamma(2, x)).epsilon(1e-11));
        CHECK(polygamma(3, x) == doctest::Approx(boost::math::polygamma(3, x)).epsilon(1e-11));
    }
    for (double x : {0.1, 1.0, 7.5})
        CHECK(std::abs(digamma(x + 1) - (digamma(x) + 1 / x)) < 1e-12);
    CHECK_THROWS_AS(polygamma(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(polygamma(4, 1.0), std::invalid_argument);
}

TEST_CASE("log-gamma cumulants")
{
    CHECK(log_gamma_cumulant(2, 1.0) == doctest::Approx(1.6449340668).epsilon(1e-10));
    CHECK(log_gamma_cumulant(3, 2.5) == doctest::Approx(boost::math::polygamma(2, 2.5)).epsilon(1e-11));
    RngStream rng(15), rng10(15);
    std::vector<double> l(1000000), l10(1000000);
    for (std::size_t i = 0; i < l.size(); ++i) {
        l[i] = sample_log_gamma(rng, {3.0, 1.0});
        l10[i] = sample_log_gamma(rng10, {3.0, 10.0});
    }
    const Moments m = moments(l), m10 = moments(l10);
    // Var of the sample variance for log-Gamma: (kappa4 + 2 kappa2^2) / N.
    const double se = std::sqrt((log_gamma_cumulant(4, 3.0) + 2 * std::pow(trigamma(3.0), 2)) / 1e6);
    CHECK(std::abs(m.var - trigamma(3.0)) < 4 * se);
    CHECK(m10.var == doctest::Approx(m.var).epsilon(1e-9));
    CHECK(m10.mean - m.mean == doctest::Approx(std::log(10.0)).epsilon(1e-9));
}

TEST_CASE("Lukacs merge and split")
{
    auto [s, r] = lukacs_merge(3, 1);
    CHECK(s == 4);
    CHECK(r == 0.75);
    auto [x, y] = lukacs_split(4, 0.75);
    CHECK(x == 3);
    CHECK(y == 1);
    RngStream rng(16);
    for (int i = 0; i < 1000; ++i) {
        const double a = sample_gamma(rng, {0.7, 1.0}), b = sample_gamma(rng, {1.3, 1.0});
        const auto [t, q] = lukacs_merge(a, b);
        const auto [a2, b2] = lukacs_split(t, q);
        CHECK(a2 == doctest::Approx(a).epsilon(1e-14));
        CHECK(b2 == doctest::Approx(b).epsilon(1e-14));
    }
    CHECK_THROWS_AS(lukacs_split(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lukacs_split(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Lukacs distributional identities")
{
    RngStream rng(17);
    const long N = 100000;
    std::vector<double> sum(N), ratio(N), p1(N), p2(N);
    for (long i = 0; i < N; ++i) {
        const auto [s, r] = lukacs_merge(sample_gamma(rng, {2.0}), sample_gamma(rng, {3.0}));
        sum[i] = s;
        ratio[i] = r;
        const auto [u, v] = lukacs_split(sample_gamma(rng, {5.0}), sample_beta(rng, {2.0, 3.0}));
        p1[i] = u;
        p2[i] = v;
    }
    const boost::math::gamma_distribution<double> g5(5.0), g2(2.0), g3(3.0);
    const boost::math::beta_distribution<double> b23(2.0, 3.0);
    const double crit = ks_critical(1e-3, N);
    CHECK(ks_statistic(sum, [&](double t) { return boost::math::cdf(g5, std::max(t, 0.0)); }).d < crit);
    CHECK(ks_statistic(ratio, [&](double t) { return boost::math::cdf(b23, std::clamp(t, 0.0, 1.0)); }).d < crit);
    CHECK(ks_statistic(p1, [&](double t) { return boost::math::cdf(g2, std::max(t, 0.0)); }).d < crit);
    CHECK(ks_statistic(p2, [&](double t) { return boost::math::cdf(g3, std::max(t, 0.0)); }).d < crit);
    CHECK(std::abs(pearson(p1, p2)) < 4.0 / std::sqrt(static_cast<double>(N)));
    CHECK(std::abs(pearson(sum, ratio)) < 4.0 / std::sqrt(static_cast<double>(N)));
}
