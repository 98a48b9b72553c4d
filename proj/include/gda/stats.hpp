#ifndef GDA_STATS_HPP
#define GDA_STATS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gda/params.hpp"
#include "gda/rng.hpp"

namespace gda {

struct TestReport
{
    std::string id;
    double statistic = 0.0;
    double threshold = 0.0;
    std::vector<long> sample_sizes;
    bool pass = false;
    std::vector<std::uint64_t> seeds;
    std::string detail;
};

using Counts = std::map<std::string, long>;

struct TwoSampleResult
{
    double tv = 0.0;
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// TV distance of the empirical laws and the chi-square homogeneity test on
// the pooled support (cells with pooled count below 10 are merged).
TwoSampleResult two_sample_stats(const Counts& a, const Counts& b);

// Passes when TV < tv_threshold and the chi-square p-value exceeds alpha.
TestReport discrete_two_sample(const std::string& id, const Counts& a, const Counts& b,
                               double tv_threshold, double alpha = 1e-3);

// Quantile q of TV under the pooled null, from `resamples` multinomial pairs.
double bootstrap_tv_quantile(const Counts& a, const Counts& b, double q, int resamples, RngStream& rng);

// Chi-square goodness of fit of counts against a probability law; cells
// with expected count below 5 are merged.
TwoSampleResult goodness_of_fit(const Counts& counts, const std::map<std::string, double>& law);

template <typename K>
std::map<std::string, double> empirical_law(const std::map<K, long>& counts)
{
    long total = 0;
    for (const auto& kv : counts)
        total += kv.second;
    std::map<std::string, double> out;
    for (const auto& [k, c] : counts) {
        if constexpr (std::is_same_v<K, std::string>)
            out[k] += static_cast<double>(c) / static_cast<double>(total);
        else
            out[std::to_string(k)] += static_cast<double>(c) / static_cast<double>(total);
    }
    return out;
}

// Asymptotic Kolmogorov critical value sqrt(-ln(alpha/2)/2) / sqrt(n).
double ks_critical(double alpha, long n);
// P(K > x) for the Kolmogorov distribution.
double kolmogorov_sf(double x);

struct KsResult
{
    double d = 0.0;
    double crit_01 = 0.0;
    double crit_001 = 0.0;
    double p_value = 1.0;
};

// Kolmogorov statistic of continuous samples against a CDF.
KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Report form; passes at level alpha.
TestReport ks_one_sample(const std::string& id, std::vector<double> samples,
                         const std::function<double(double)>& cdf, double alpha = 1e-3);
// Integer-valued samples against a continuous CDF with continuity
// correction: sup over support points k of |F_emp(k) - cdf(k + 1/2)|.
KsResult ks_lattice(const std::vector<long>& samples, const std::function<double(double)>& cdf);

struct IndependenceResult
{
    double r_raw = 0.0;
    double r_log = 0.0;
    double perm_p = 1.0;  // permutation p-value of |r_log|
    long n = 0;
};

double pearson(const std::vector<double>& x, const std::vector<double>& y);
// Raw and log-scale Pearson r with a permutation p-value; log scale is
// skipped (NaN) when any entry is nonpositive.
IndependenceResult independence_stats(const std::vector<double>& x, const std::vector<double>& y,
                                      int permutations, RngStream& rng);
// Passes when |r| < bound_factor / sqrt(N) on both scales.
TestReport independence_suite(const std::string& id, const std::vector<double>& x,
                              const std::vector<double>& y, double bound_factor, RngStream& rng,
                              int permutations = 200);

struct FreeEnergyReport
{
    int n = 0;
    double T = 1.0;
    std::string params;
    double mean = 0.0;
    double variance = 0.0;
    long replicas = 0;
    double annealed = 0.0;       // F_n^a
    double quenched_mean = 0.0;  // E F_n
    double variance_formula = 0.0;
    double variance_alt = 0.0;   // 2n(n+1) T^2 Psi_1 normalization
    double gap_normalized = 0.0; // (F^a - E F) / n^2
    double gap_lower = 0.0;      // (1 / 2n^2) sum 1/(psi+phi)
    double gap_upper = 0.0;
    double ks = 0.0;             // normalized F_n vs N(0,1), formula variance
    double ks_alt = 0.0;         // same with the alternative variance
    double ks_crit = 0.0;        // 10^-3 critical value
};

// Closed-form values at temperature T (shapes scaled by T); no sampling.
FreeEnergyReport free_energy_formulas(const ParamSet& params, int n, double T);
// Adds Monte Carlo moments and the CLT KS statistic. Uses log-domain
// cascades, so arbitrarily small shapes are allowed.
FreeEnergyReport free_energy_mc(const ParamSet& params, int n, double T, long replicas, RngStream& rng);
// Parameters at temperature T: every shape multiplied by T.
ParamSet scale_params(const ParamSet& params, double T);

struct ScalingFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Least-squares slope of log spread against log n.
ScalingFit scaling_exponent(const std::vector<double>& ns, const std::vector<double>& spreads);
// Same with a percentile bootstrap CI from resampling each size's samples;
// spread is the sample standard deviation.
ScalingFit scaling_exponent_bootstrap(const std::vector<double>& ns,
                                      const std::vector<std::vector<double>>& samples, int resamples,
                                      RngStream& rng);
double sample_sd(const std::vector<double>& x);

// Gauss-Hermite nodes and weights for weight exp(-x^2).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order);
// E f(Z) for Z ~ N(mu, sigma^2).
double normal_expectation(const std::function<double(double)>& f, double mu, double sigma, int order = 80);

} // namespace gda

#endif
