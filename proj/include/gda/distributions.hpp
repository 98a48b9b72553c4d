#ifndef GDA_DISTRIBUTIONS_HPP
#define GDA_DISTRIBUTIONS_HPP

#include <utility>

#include "gda/rng.hpp"

namespace gda {

struct GammaParams
{
    GammaParams(double shape, double scale = 1.0);
    double shape;
    double scale;
};

struct BetaParams
{
    BetaParams(double alpha, double beta);
    double alpha;
    double beta;
};

// Gamma variate. For shape < 1 the draw is made in log space, so the
// result is strictly positive whenever exp(log X) is representable.
double sample_gamma(RngStream& rng, const GammaParams& p);

// log X for X ~ Gamma(shape, scale); safe for arbitrarily small shapes.
double sample_log_gamma(RngStream& rng, const GammaParams& p);

// Beta variate in the open interval (0,1).
double sample_beta(RngStream& rng, const BetaParams& p);

// log B and log(1-B) for B ~ Beta(alpha, beta), from one pair of gammas.
std::pair<double, double> sample_log_beta_pair(RngStream& rng, const BetaParams& p);

double sample_lognormal(RngStream& rng, double mu = 0.0, double sigma = 1.0);

// Polygamma Psi_k(x) for k in {0,1,2,3}, x > 0.
double polygamma(int k, double x);
inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }

// k-th cumulant of log X for X ~ Gamma(shape, s); k in {2,3,4}.
double log_gamma_cumulant(int k, double shape);

// (x, y) -> (x + y, x / (x + y)).
std::pair<double, double> lukacs_merge(double x, double y);

// (a, b) -> (b a, (1 - b) a), requires 0 < b < 1.
std::pair<double, double> lukacs_split(double a, double b);

} // namespace gda

#endif
