#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include "gda/bipartite.hpp"
#include "gda/distributions.hpp"
#include "gda/io.hpp"
#include "gda/stats.hpp"
#include "gda/weights.hpp"

using namespace gda;

namespace {

Grid<double> grid(std::initializer_list<std::initializer_list<double>> rows)
{
    Grid<double> g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row)
            g(r, c++) = v;
        ++r;
    }
    return g;
}

double gamma_cdf(double shape, double x)
{
    return boost::math::cdf(boost::math::gamma_distribution<double>(shape), std::max(x, 0.0));
}

} // namespace

TEST_CASE("parameter sequences")
{
    const IndexedSequence s(-2, {1.0, 2.0, 3.0});
    CHECK(s(-2) == 1.0);
    CHECK(s(0) == 3.0);
    CHECK(s.max_index() == 0);
    CHECK_THROWS_AS(s(1), std::out_of_range);
    CHECK(IndexedSequence::constant(4.0)(123) == 4.0);
    CHECK_THROWS_AS(IndexedSequence(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(ParamSet::homogeneous(-1.0, 1.0).validate(2), std::invalid_argument);
    CHECK_NOTHROW(ParamSet::homogeneous(0.2, 0.25).validate(5));
}

TEST_CASE("theta shift reparametrization leaves shapes unchanged")
{
    ParamSet p;
    p.psi = IndexedSequence(1, {1.0, 1.5, 2.0});
    p.phi = IndexedSequence(-2, {0.7, 0.9, 1.1});
    p.theta = IndexedSequence::constant(0.0);
    const double c = 0.3;
    ParamSet q;
    q.psi = IndexedSequence(1, {1.0 - c, 1.5 - c, 2.0 - c});
    q.phi = IndexedSequence(-2, {0.7 + c, 0.9 + c, 1.1 + c});
    q.theta = IndexedSequence::constant(c);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            CHECK(q.a_shape(i, j) == doctest::Approx(p.a_shape(i, j)));
            CHECK(q.b_shape(i, j, 3) == doctest::Approx(p.b_shape(i, j, 3)));
        }
}

TEST_CASE("sampled field marginals in the small-shape regime")
{
    const ParamSet p = ParamSet::homogeneous(0.2, 0.25);
    RngStream rng(21);
    const long N = 20000;
    std::vector<double> a, b;
    for (long r = 0; r < N; ++r) {
        const WeightFieldd w = sample_weight_field(p, 2, rng);
        a.push_back(w.A(1, 2));
        b.push_back(w.B(2, 1));
    }
    const double crit = ks_critical(1e-3, N);
    CHECK(ks_statistic(a, [](double x) { return gamma_cdf(0.2, x); }).d < crit);
    CHECK(ks_statistic(b, [](double x) { return gamma_cdf(0.25, x); }).d < crit);
}

TEST_CASE("order-1 field: a + b has mean 2")
{
    const ParamSet p = ParamSet::homogeneous(1.0, 1.0);
    RngStream rng(22);
    std::vector<double> s;
    for (int r = 0; r < 100000; ++r) {
        const WeightFieldd w = sample_weight_field(p, 1, rng);
        s.push_back(w.A(1, 1) + w.B(1, 1));
    }
    const double sd = sample_sd(s);
    double mean = 0;
    for (double v : s)
        mean += v;
    mean /= static_cast<double>(s.size());
    CHECK(std::abs(mean - 2.0) < 4 * sd / std::sqrt(static_cast<double>(s.size())));
}

TEST_CASE("downshuffle by hand")
{
    const WeightFieldd w(2, grid({{1, 1}, {2, 1}}), grid({{1, 3}, {2, 1}}));
    const WeightFieldd d = downshuffle(w);
    CHECK(d.level == 1);
    CHECK(d.rows() == 1);
    CHECK(d.A(1, 1) == doctest::Approx(2.0));
    CHECK(d.B(1, 1) == doctest::Approx(1.5));
}

TEST_CASE("constant fields are fixed points")
{
    const WeightFieldd w = WeightFieldd::constant(5, 0.7, 1.9);
    const WeightFieldd d = downshuffle(w);
    CHECK((d.a - 0.7).abs().maxCoeff() < 1e-14);
    CHECK((d.b - 1.9).abs().maxCoeff() < 1e-14);
    const WeightFieldd u = upshuffle(w);
    CHECK(u.level == 6);
    CHECK(u.i_min == 2);
    CHECK((u.a - 0.7).abs().maxCoeff() < 1e-14);
    CHECK((u.b - 1.9).abs().maxCoeff() < 1e-14);
    const auto levels = cascade(w);
    CHECK(levels.size() == 5);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        CHECK(levels[k].rows() == static_cast<int>(5 - k));
        CHECK((levels[k].a - 0.7).abs().maxCoeff() < 1e-14);
    }
    CHECK(cascade(WeightFieldd::constant(1, 1.0, 1.0)).size() == 1);
}

TEST_CASE("upshuffle inverts downshuffle on the interior")
{
    RngStream rng(23);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(1.3, 0.8), 6, rng);
    const WeightFieldd back = upshuffle(downshuffle(w));
    CHECK(back.level == 6);
    for (int i = back.i_min; i <= back.i_max(); ++i)
        for (int j = back.j_min; j <= back.j_max(); ++j) {
            CHECK(back.A(i, j) == doctest::Approx(w.A(i, j)).epsilon(1e-12));
            CHECK(back.B(i, j) == doctest::Approx(w.B(i, j)).epsilon(1e-12));
        }
}

TEST_CASE("log-domain downshuffle and partition product agree with linear arithmetic")
{
    RngStream rng(24);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.9, 1.4), 7, rng);
    WeightFieldd lw = w;
    lw.a = w.a.log();
    lw.b = w.b.log();
    const WeightFieldd ld = log_downshuffle(lw), d = downshuffle(w);
    CHECK((ld.a.exp() - d.a).abs().maxCoeff() < 1e-12);
    CHECK((ld.b.exp() - d.b).abs().maxCoeff() < 1e-12);
    CHECK(log_partition_product(lw) == doctest::Approx(partition_product(Cascaded(w))).epsilon(1e-12));
}

TEST_CASE("partition product on small fields")
{
    CHECK(partition_product(Cascaded(WeightFieldd::constant(1, 1.0, 1.0))) == doctest::Approx(std::log(2.0)));
    CHECK(partition_product(Cascaded(WeightFieldd::constant(2, 1.0, 1.0))) == doctest::Approx(3 * std::log(2.0)));
    RngStream rng(25);
    for (int t = 0; t < 5; ++t) {
        const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(1.0, 2.0), 4, rng);
        double log_z = 0;
        aztec_exact_law(w, &log_z);
        CHECK(std::abs(partition_product(Cascaded(w)) - log_z) < 1e-9);
    }
}

TEST_CASE("vertical swap update")
{
    Eigen::ArrayXd b1(2), g1(2);
    b1 << 0.5, 0.5;
    g1 << 1, 1;
    const SwapResult s1 = vswap_update(b1, g1);
    CHECK(s1.gamma_hat.size() == 1);
    CHECK(s1.gamma_hat(0) == doctest::Approx(1.0));
    CHECK(s1.beta_hat(0) == doctest::Approx(0.5));
    Eigen::ArrayXd b2(2), g2(2);
    b2 << 0.25, 0.5;
    g2 << 2, 4;
    const SwapResult s2 = vswap_update(b2, g2);
    CHECK(s2.gamma_hat(0) == doctest::Approx(2.5));
    CHECK(s2.beta_hat(0) == doctest::Approx(0.2));
}

TEST_CASE("vertical swap preserves the Beta/Gamma family")
{
    RngStream rng(26);
    const long N = 50000;
    const double x1 = 1.2, x2 = 0.6, y1 = 0.9, y2 = 1.7;
    std::vector<double> gh, bh;
    for (long r = 0; r < N; ++r) {
        Eigen::ArrayXd b(2), g(2);
        b << sample_beta(rng, {x1, y1}), sample_beta(rng, {x2, y2});
        g << sample_gamma(rng, {x1 + y1}), sample_gamma(rng, {x2 + y2});
        const SwapResult s = vswap_update(b, g);
        gh.push_back(s.gamma_hat(0));
        bh.push_back(s.beta_hat(0));
    }
    const double crit = ks_critical(1e-3, N);
    CHECK(ks_statistic(gh, [&](double t) { return gamma_cdf(x1 + y2, t); }).d < crit);
    const boost::math::beta_distribution<double> bd(x1, y2);
    CHECK(ks_statistic(bh, [&](double t) { return boost::math::cdf(bd, std::clamp(t, 0.0, 1.0)); }).d < crit);
    CHECK(std::abs(pearson(gh, bh)) < 4.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("horizontal swap update is the downshuffle on a pair of rows")
{
    RngStream rng(27);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(1.1, 0.7), 5, rng);
    const WeightFieldd d = downshuffle(w);
    for (int j = 1; j <= 4; ++j) {
        const HSwapResult h = hswap_update(w.a.col(j - 1), w.b.col(j - 1), w.a.col(j), w.b.col(j));
        CHECK((h.a - d.a.col(j - 1)).abs().maxCoeff() < 1e-12);
        CHECK((h.b - d.b.col(j - 1)).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("downshuffle preserves Gamma marginals")
{
    ParamSet p;
    p.psi = IndexedSequence(1, {0.8, 1.4, 1.1});
    p.phi = IndexedSequence(-2, {1.2, 0.6, 1.5});
    p.theta = IndexedSequence(1, {0.1, -0.2, 0.05});
    RngStream rng(28);
    const long N = 20000;
    std::vector<double> a11, b12, a21;
    for (long r = 0; r < N; ++r) {
        const WeightFieldd d = downshuffle(sample_weight_field(p, 3, rng));
        a11.push_back(d.A(1, 1));
        b12.push_back(d.B(1, 2));
        a21.push_back(d.A(2, 1));
    }
    const double crit = ks_critical(1e-3 / 3, N);
    CHECK(ks_statistic(a11, [&](double t) { return gamma_cdf(p.a_shape(1, 1), t); }).d < crit);
    CHECK(ks_statistic(b12, [&](double t) { return gamma_cdf(p.b_shape(1, 2, 2), t); }).d < crit);
    CHECK(ks_statistic(a21, [&](double t) { return gamma_cdf(p.a_shape(2, 1), t); }).d < crit);
    CHECK(std::abs(pearson(a11, b12)) < 5.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("Fock face weights converge to the limit weights")
{
    ParamSet p;
    p.psi = IndexedSequence::constant(1.0);
    p.phi = IndexedSequence::constant(2.0);
    p.theta = IndexedSequence::constant(0.0);
    const FaceWeightGrid f = fock_face_weights(p, 3, 1e6);
    CHECK(std::abs(f.even(0, 0) - 0.5) / 0.5 < 1e-5);
    const FaceWeightGrid lim = limit_face_weights(p, 3);
    CHECK(lim.even(1, 2) == doctest::Approx(0.5));
    for (double D : {1e2, 1e3, 1e4}) {
        const double e1 = std::abs(fock_face_weights(p, 3, D).even(0, 0) - 0.5);
        const double e2 = std::abs(fock_face_weights(p, 3, 2 * D).even(0, 0) - 0.5);
        CHECK(e2 / e1 > 0.4);
        CHECK(e2 / e1 < 0.6);
    }
    CHECK_THROWS_AS(fock_face_weights(p, 3, 1.0), std::invalid_argument);
}

TEST_CASE("limit even face weight with zero theta is psi_j / phi_{j-n}")
{
    ParamSet p;
    p.psi = IndexedSequence(1, {0.8, 1.4, 1.1, 2.0});
    p.phi = IndexedSequence(-3, {1.2, 0.6, 1.5, 0.9});
    p.theta = IndexedSequence::constant(0.0);
    const FaceWeightGrid f = limit_face_weights(p, 4);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            CHECK(f.even(i - 1, j - 1) == doctest::Approx(p.psi(j) / p.phi(j - 4)));
}

TEST_CASE("weight field JSON round trip is bit-exact")
{
    RngStream rng(29);
    const WeightFieldd w = sample_weight_field(ParamSet::homogeneous(0.2, 0.25), 4, rng);
    const Json j = to_json(w);
    CHECK(j["level"] == 4);
    CHECK(j["a"].size() == 16);
    const WeightFieldd back = weight_field_from_json(Json::parse(j.dump()));
    CHECK(back.level == 4);
    CHECK(back.is_full());
    CHECK(std::memcmp(back.a.data(), w.a.data(), 16 * sizeof(double)) == 0);
    CHECK(std::memcmp(back.b.data(), w.b.data(), 16 * sizeof(double)) == 0);
    // Row-major layout.
    CHECK(j["a"][1].get<double>() == w.A(1, 2));

    const WeightFieldd win = sample_weight_window(ParamSet::homogeneous(1, 1), 4, 2, 4, 1, 3, rng);
    const WeightFieldd wb = weight_field_from_json(to_json(win));
    CHECK(wb.i_min == 2);
    CHECK(wb.rows() == 3);
    CHECK((wb.a == win.a).all());

    CHECK_THROWS_AS(weight_field_from_json(Json::parse(R"({"level": 2, "a": [1, 2, 3], "b": [1, 2, 3, 4]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(weight_field_from_json(Json::parse(R"({"a": []})")), std::invalid_argument);
}

TEST_CASE("parameter JSON")
{
    const ParamSet p = params_from_json(Json::parse(R"({"psi": [1, 2], "phi": [3, 4], "theta": 0.1, "s": 1})"));
    CHECK(p.psi(1) == 1);
    CHECK(p.psi(2) == 2);
    CHECK(p.phi(-1) == 3);
    CHECK(p.phi(0) == 4);
    CHECK(p.theta(7) == doctest::Approx(0.1));
    const ParamSet q = params_from_json(Json::parse(R"({"psi": 1, "phi": [3, 4, 5], "phi_min_index": -4, "theta": 0})"));
    CHECK(q.phi(-4) == 3);
    const ParamSet r = params_from_json(to_json(p));
    CHECK(r.phi(-1) == 3);
    CHECK(r.psi(2) == 2);
    CHECK_THROWS_AS(params_from_json(Json::parse(R"({"phi": 1})")), std::invalid_argument);
    CHECK_THROWS_AS(params_from_json(Json::parse(R"({"psi": "x", "phi": 1})")), std::invalid_argument);
}
