#ifndef GDA_POLYMER_HPP
#define GDA_POLYMER_HPP

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gda/params.hpp"
#include "gda/paths.hpp"
#include "gda/rng.hpp"
#include "gda/weights.hpp"

namespace gda {

// Edge weights of the two-regime digraph with p paths and m left columns.
// Left part (x < 0): 'H' and 'D' steps; right part (x >= 0): 'H' and 'V'.
class PolymerWeights
{
    public:
        PolymerWeights(int p, int m);

        int p() const { return p_; }
        int m() const { return m_; }
        bool contains(int x, int y) const;
        // Weight of the step leaving (x, y); 0 when the step leaves the digraph.
        double step_weight(int x, int y, char step) const;
        void set(int x, int y, char step, double w);

    private:
        std::size_t idx(int x, int y, char step) const;
        int p_, m_;
        std::vector<double> w_;
};

// beta(x, y) on left 'H' steps with 1 - beta on 'D'; gamma(x, y) on right
// 'H' steps with 1 on 'V'.
template <typename FB, typename FG>
PolymerWeights make_bg_weights(int p, int m, FB&& beta, FG&& gamma)
{
    PolymerWeights pw(p, m);
    for (int x = -m; x <= p - 1; ++x)
        for (int y = -m - p; y <= -1; ++y) {
            if (!pw.contains(x, y))
                continue;
            if (x < 0) {
                const double b = beta(x, y);
                pw.set(x, y, 'H', b);
                pw.set(x, y, 'D', 1.0 - b);
            } else {
                pw.set(x, y, 'H', gamma(x, y));
                pw.set(x, y, 'V', 1.0);
            }
        }
    return pw;
}

// rho(x, y) on left 'H' steps with 1 on 'D'; kappa(x, y) on both right steps.
template <typename FR, typename FK>
PolymerWeights make_glg_weights(int p, int m, FR&& rho, FK&& kappa)
{
    PolymerWeights pw(p, m);
    for (int x = -m; x <= p - 1; ++x)
        for (int y = -m - p; y <= -1; ++y) {
            if (!pw.contains(x, y))
                continue;
            if (x < 0) {
                pw.set(x, y, 'H', rho(x, y));
                pw.set(x, y, 'D', 1.0);
            } else {
                const double k = kappa(x, y);
                pw.set(x, y, 'H', k);
                pw.set(x, y, 'V', k);
            }
        }
    return pw;
}

// Weights induced by an Aztec cascade of size n at slice l (p = n-l+1, m = l):
// beta_{x,y} = beta^{[n+x+1]}_{l+x+1,-y}, gamma_{x,y} = gamma^{[n-x]}_{l+1,-y}.
PolymerWeights bg_weights_from_cascade(const Cascaded& c, int n, int l);
// rho_{x,y} = a^{[n+x+1]}_{-y,l+x+1}, kappa_{x,y} = 1 / b^{[n-x]}_{-y,l}.
PolymerWeights glg_weights_from_cascade(const Cascaded& c, int n, int l);

struct PathMeasure
{
    struct Entry
    {
        PathTuple paths;
        double log_weight;
        double prob;
    };
    std::vector<Entry> entries;
    double log_z = 0.0;
};

constexpr int polymer_enum_guard = 5;

// All nonintersecting tuples with their quenched probabilities.
PathMeasure polymer_exact(const PolymerWeights& w, int guard = polymer_enum_guard);
PathMeasure bg_polymer_exact(const PolymerWeights& w);
PathMeasure glg_polymer_exact(const PolymerWeights& w);

// Beta random walk in random environment; returns X_0 .. X_T.
std::vector<int> beta_rwre(const ParamSet& params, int T, RngStream& rng);
// Quenched walk in a given environment B(y, t) (stay probability).
template <typename FB>
std::vector<int> beta_rwre_quenched(int T, FB&& stay, RngStream& rng)
{
    std::vector<int> x{-1};
    for (int t = 0; t < T; ++t) {
        const int cur = x.back();
        x.push_back(rng.uniform() < stay(cur, t) ? cur : cur - 1);
    }
    return x;
}
// Exact law of X_T in environment stay(y, t), keyed by X_T.
template <typename FB>
std::map<int, double> beta_rwre_exact(int T, FB&& stay)
{
    std::map<int, double> law{{-1, 1.0}};
    for (int t = 0; t < T; ++t) {
        std::map<int, double> next;
        for (const auto& [y, p] : law) {
            const double b = stay(y, t);
            next[y] += p * b;
            next[y - 1] += p * (1.0 - b);
        }
        law = std::move(next);
    }
    return law;
}

enum class StatModel { LogGamma, StrictWeak };

// Stationary polymer environment on {0..n} x {0..n}. For log-Gamma, `y`
// holds log point weights; for strict-weak, `h` holds log horizontal edge
// weights and `v` log vertical ones. lz is the log partition table.
struct StatPolymerEnv
{
    StatModel model;
    int n = 0;
    Grid<double> y;   // log Y_{i,j}
    Grid<double> h;   // log weight of (i,j)->(i+1,j)
    Grid<double> v;   // log weight of (i,j)->(i,j+1)
    Grid<double> lz;  // log Z_{i,j}
};

StatPolymerEnv stat_loggamma(int n, double alpha, double beta, RngStream& rng);
StatPolymerEnv stat_strictweak(int n, double alpha, double beta, RngStream& rng);
// Recompute lz from the weights (used by tests after editing weights).
void fill_partition_table(StatPolymerEnv& env);

// Up-right lattice path as its list of points from (0,0).
using UpRightPath = std::vector<LatticePoint>;

UpRightPath sample_path_backward(const StatPolymerEnv& env, int mx, int ny, RngStream& rng);
// Quenched law of all paths to (mx, ny), keyed by the step string ('R'/'U').
std::map<std::string, double> stat_path_law(const StatPolymerEnv& env, int mx, int ny);
std::string path_steps(const UpRightPath& p);

struct CrossingStats
{
    int x_mid = -1;
    int v0 = -1, v1 = -1, w0 = -1, w1 = -1;
};

// x of the path point on x + y = n.
int x_mid(const UpRightPath& p, int n);
// v0(l), v1(l): min/max x with (x, l) on the path; w0(k), w1(k): min/max y with (k, y).
CrossingStats crossings(const UpRightPath& p, int n, int line_l, int line_k);

// Dual-path polymer on n columns: explicit weights gamma(x, y) for x in
// 0..n-2, y <= -1, y - x >= -n, and boundary ratios a_j / b_j, j = 1..n.
struct EdgeGammaWeights
{
    int n = 0;
    std::map<std::pair<int, int>, double> gamma;
    std::vector<double> a;  // a_1..a_n
    std::vector<double> b;
};
// Quenched law of the start height Y in {-n-1 .. -1}.
std::map<int, double> edge_gamma_endpoint_law(const EdgeGammaWeights& w);
// Weights induced by a level-n cascade: gamma = a^{[n-x]}_{2,-y} + b^{[n-x]}_{2,-y},
// a_j = a^{[n]}_{1,j}, b_j = b^{[n]}_{1,j}.
EdgeGammaWeights edge_gamma_from_cascade(const Cascaded& c);
// Homogeneous random weights: gamma ~ Gamma(alpha+beta), a_j ~ Gamma(alpha), b_j ~ Gamma(beta).
EdgeGammaWeights sample_edge_gamma(int n, double alpha, double beta, RngStream& rng);
int sample_edge_gamma_endpoint(const EdgeGammaWeights& w, RngStream& rng);

// Pieces of the top-right m x n box visited by a stationary log-Gamma path
// on (M, N), shifted to the origin, versus a fresh (m, n) path interior.
struct RestrictionSamples
{
    std::map<std::string, long> restricted;
    std::map<std::string, long> fresh;
};
RestrictionSamples stationarity_restriction(int M, int N, int m, int n, double alpha, double beta,
                                            long samples, RngStream& rng);

} // namespace gda

#endif
