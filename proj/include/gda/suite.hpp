#ifndef GDA_SUITE_HPP
#define GDA_SUITE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gda/params.hpp"
#include "gda/rng.hpp"
#include "gda/stats.hpp"

namespace gda {

// Random admissible parameters for fields up to level n: psi, phi in
// [0.5, 2], theta in [-0.25, 0.25].
ParamSet random_params(int n, RngStream& rng);

struct Criterion
{
    int id;
    std::string name;
    std::function<TestReport(std::uint64_t seed)> run;
};

// The twelve acceptance criteria, in order.
const std::vector<Criterion>& acceptance_criteria();

// Individual checks shared by the criteria, the suites and the CLI.
TestReport check_partition_factorization(std::uint64_t seed, int fields_per_size = 50, int max_n = 5);
TestReport check_shuffle_law(std::uint64_t seed, const std::vector<int>& sizes = {2, 3}, int envs = 5,
                             long trajectories = 100000);
TestReport check_vertical_slice(std::uint64_t seed, int n, int l, int envs = 3);
TestReport check_horizontal_slice(std::uint64_t seed, int n, int l, int envs = 3);
TestReport check_dynamical(std::uint64_t seed, int k, int T, int envs = 5);
TestReport check_east_two_sample(std::uint64_t seed, int n, long samples, double alpha, double beta);
TestReport check_east_clt(std::uint64_t seed, int n, long samples, double alpha, double beta);
TestReport check_west_two_sample(std::uint64_t seed, int n, long samples, double alpha, double beta);
TestReport check_south_two_sample(std::uint64_t seed, int n, long samples, double alpha, double beta);
TestReport check_edge_gamma(std::uint64_t seed, int n, int envs = 3);
TestReport check_burke(std::uint64_t seed, long envs);
TestReport check_gamma_preservation(std::uint64_t seed, long replicas);
TestReport check_lognormal_control(std::uint64_t seed, long replicas);
// Quadrature reference for the log-scale correlation of the lognormal control.
double lognormal_reference_correlation();
TestReport check_free_energy(std::uint64_t seed, int n, double T, long replicas);
TestReport check_free_energy_sandwich(std::uint64_t seed, int sets = 20);
TestReport check_scaling(std::uint64_t seed, long envs);
TestReport check_spider(std::uint64_t seed, int trials = 5);
TestReport check_vertex_expansion(std::uint64_t seed, int trials = 5);
TestReport check_column_swap(std::uint64_t seed, int trials = 5);
TestReport check_frozen_edges(std::uint64_t seed);
TestReport check_fock_limit(std::uint64_t seed, int sets = 10);

// Samples of x_mid for stationary polymers and of -X_n - 1 for the walk.
std::vector<double> xmid_samples(const std::string& model, int n, long envs, double alpha, double beta,
                                 RngStream& rng);

struct SuiteConfig
{
    std::vector<std::string> tests;
    std::map<std::string, std::vector<std::vector<int>>> sizes;
    long replicas = 100000;
    std::uint64_t seed = 1;
};

// Names accepted in SuiteConfig::tests.
const std::vector<std::string>& match_test_names();
// Throws std::invalid_argument on unknown tests or malformed sizes.
void validate_suite_config(const SuiteConfig& cfg);
std::vector<TestReport> match_suite(const SuiteConfig& cfg);
// Deterministic enumeration identities.
std::vector<TestReport> oracle_suite(std::uint64_t seed);

} // namespace gda

#endif
