#include "gda/distributions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gda {

GammaParams::GammaParams(double shape_, double scale_)
    : shape(shape_), scale(scale_)
{
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::invalid_argument("gamma shape must be positive, got " + std::to_string(shape));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("gamma scale must be positive, got " + std::to_string(scale));
}

BetaParams::BetaParams(double alpha_, double beta_)
    : alpha(alpha_), beta(beta_)
{
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("beta parameters must be positive");
}

namespace {

// Marsaglia-Tsang for shape >= 1, returns log of a unit-scale draw.
double log_gamma_mt(RngStream& rng, double shape)
{
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return std::log(d) + std::log(v);
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return std::log(d) + std::log(v);
    }
}

} // namespace

double sample_log_gamma(RngStream& rng, const GammaParams& p)
{
    double lg;
    if (p.shape >= 1.0) {
        lg = log_gamma_mt(rng, p.shape);
    } else {
        // Gamma(k) = Gamma(k+1) * U^{1/k}
        lg = log_gamma_mt(rng, p.shape + 1.0) + std::log(rng.uniform()) / p.shape;
    }
    return lg + std::log(p.scale);
}

double sample_gamma(RngStream& rng, const GammaParams& p)
{
    const double x = std::exp(sample_log_gamma(rng, p));
    return x > 0.0 ? x : std::numeric_limits<double>::denorm_min();
}

std::pair<double, double> sample_log_beta_pair(RngStream& rng, const BetaParams& p)
{
    const double lx = sample_log_gamma(rng, GammaParams(p.alpha));
    const double ly = sample_log_gamma(rng, GammaParams(p.beta));
    const double m = std::max(lx, ly);
    const double ls = m + std::log(std::exp(lx - m) + std::exp(ly - m));
    return {lx - ls, ly - ls};
}

double sample_beta(RngStream& rng, const BetaParams& p)
{
    const double lb = sample_log_beta_pair(rng, p).first;
    const double b = std::exp(lb);
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::min(std::max(b, lo), hi);
}

double sample_lognormal(RngStream& rng, double mu, double sigma)
{
    return std::exp(mu + sigma * rng.normal());
}

namespace {

// B_2, B_4, ..., B_20
constexpr std::array<double, 10> bernoulli_even = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

// Asymptotic expansion, accurate for x >= 10.
double polygamma_asymptotic(int k, double x)
{
    if (k == 0) {
        double s = std::log(x) - 0.5 / x;
        const double ix2 = 1.0 / (x * x);
        double xp = ix2;
        for (int j = 1; j <= 10; ++j) {
            s -= bernoulli_even[j - 1] / (2.0 * j) * xp;
            xp *= ix2;
        }
        return s;
    }
    // (-1)^{k+1} [ (k-1)!/x^k + k!/(2x^{k+1}) + sum_j B_2j (2j+k-1)!/((2j)! x^{2j+k}) ]
    double s = factorial(k - 1) / std::pow(x, k) + factorial(k) / (2.0 * std::pow(x, k + 1));
    for (int j = 1; j <= 10; ++j) {
        const double term = bernoulli_even[j - 1] * factorial(2 * j + k - 1)
                            / (factorial(2 * j) * std::pow(x, 2 * j + k));
        s += term;
    }
    return (k % 2 == 1) ? s : -s;
}

} // namespace

double polygamma(int k, double x)
{
    if (k < 0 || k > 3)
        throw std::invalid_argument("polygamma order must be in 0..3");
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("polygamma argument must be positive and finite");

    constexpr double x_min = 10.0;
    // Psi_k(x) = Psi_k(x+1) - (-1)^k k! / x^{k+1}
    double shift = 0.0;
    const double kf = factorial(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    while (x < x_min) {
        shift += sign * kf / std::pow(x, k + 1);
        x += 1.0;
    }
    return polygamma_asymptotic(k, x) - shift;
}

double log_gamma_cumulant(int k, double shape)
{
    if (k < 2 || k > 4)
        throw std::invalid_argument("log-gamma cumulant order must be in 2..4");
    return polygamma(k - 1, shape);
}

std::pair<double, double> lukacs_merge(double x, double y)
{
    if (!(x > 0.0) || !(y > 0.0))
        throw std::invalid_argument("lukacs_merge needs positive inputs");
    const double s = x + y;
    return {s, x / s};
}

std::pair<double, double> lukacs_split(double a, double b)
{
    if (!(a > 0.0))
        throw std::invalid_argument("lukacs_split needs a positive total");
    if (!(b > 0.0 && b < 1.0))
        throw std::invalid_argument("lukacs_split ratio must lie in (0,1)");
    return {b * a, (1.0 - b) * a};
}

} // namespace gda
