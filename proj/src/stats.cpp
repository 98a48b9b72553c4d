#include "gda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "gda/distributions.hpp"
#include "gda/weights.hpp"

namespace gda {

namespace {

long total_count(const Counts& c)
{
    long t = 0;
    for (const auto& kv : c) {
        if (kv.second < 0)
            throw std::invalid_argument("negative count");
        t += kv.second;
    }
    return t;
}

double chi2_sf(double x, int dof)
{
    if (dof < 1)
        return 1.0;
    boost::math::chi_squared_distribution<double> d(dof);
    return boost::math::cdf(boost::math::complement(d, std::max(x, 0.0)));
}

} // namespace

TwoSampleResult two_sample_stats(const Counts& a, const Counts& b)
{
    const long na = total_count(a), nb = total_count(b);
    if (na == 0 || nb == 0)
        throw std::invalid_argument("two-sample test needs nonempty samples");
    std::set<std::string> keys;
    for (const auto& kv : a)
        keys.insert(kv.first);
    for (const auto& kv : b)
        keys.insert(kv.first);

    TwoSampleResult r;
    std::vector<std::pair<double, double>> cells;
    double pend_a = 0, pend_b = 0;
    for (const auto& k : keys) {
        const double ca = a.count(k) ? static_cast<double>(a.at(k)) : 0.0;
        const double cb = b.count(k) ? static_cast<double>(b.at(k)) : 0.0;
        r.tv += 0.5 * std::abs(ca / na - cb / nb);
        if (ca + cb < 10) {
            pend_a += ca;
            pend_b += cb;
            if (pend_a + pend_b >= 10) {
                cells.push_back({pend_a, pend_b});
                pend_a = pend_b = 0;
            }
        } else {
            cells.push_back({ca, cb});
        }
    }
    if (pend_a + pend_b > 0) {
        if (cells.empty())
            cells.push_back({pend_a, pend_b});
        else {
            cells.back().first += pend_a;
            cells.back().second += pend_b;
        }
    }
    const double n = static_cast<double>(na + nb);
    for (const auto& [ca, cb] : cells) {
        const double tot = ca + cb;
        const double ea = tot * na / n, eb = tot * nb / n;
        r.chi2 += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = chi2_sf(r.chi2, r.dof);
    return r;
}

TestReport discrete_two_sample(const std::string& id, const Counts& a, const Counts& b,
                               double tv_threshold, double alpha)
{
    const TwoSampleResult s = two_sample_stats(a, b);
    TestReport rep;
    rep.id = id;
    rep.statistic = s.tv;
    rep.threshold = tv_threshold;
    rep.sample_sizes = {total_count(a), total_count(b)};
    rep.pass = s.tv < tv_threshold && s.p_value > alpha;
    std::ostringstream os;
    os << "chi2=" << s.chi2 << " dof=" << s.dof << " p=" << s.p_value;
    rep.detail = os.str();
    return rep;
}

namespace {

// Multinomial draw by sequential binomials.
std::vector<long> multinomial(long n, const std::vector<double>& p, RngStream& rng)
{
    std::vector<long> out(p.size(), 0);
    double rest = 1.0;
    long left = n;
    for (std::size_t i = 0; i < p.size() && left > 0; ++i) {
        if (i + 1 == p.size()) {
            out[i] = left;
            break;
        }
        const double q = std::clamp(p[i] / rest, 0.0, 1.0);
        std::binomial_distribution<long> bin(left, q);
        out[i] = bin(rng.engine());
        left -= out[i];
        rest -= p[i];
        if (rest <= 0)
            break;
    }
    return out;
}

} // namespace

double bootstrap_tv_quantile(const Counts& a, const Counts& b, double q, int resamples, RngStream& rng)
{
    const long na = total_count(a), nb = total_count(b);
    if (na == 0 || nb == 0 || resamples < 1)
        throw std::invalid_argument("bootstrap needs nonempty samples");
    std::map<std::string, double> pooled;
    for (const auto& [k, c] : a)
        pooled[k] += c;
    for (const auto& [k, c] : b)
        pooled[k] += c;
    std::vector<double> p;
    for (const auto& kv : pooled)
        p.push_back(kv.second / static_cast<double>(na + nb));
    std::vector<double> tvs;
    for (int r = 0; r < resamples; ++r) {
        const auto xa = multinomial(na, p, rng), xb = multinomial(nb, p, rng);
        double tv = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            tv += 0.5 * std::abs(static_cast<double>(xa[i]) / na - static_cast<double>(xb[i]) / nb);
        tvs.push_back(tv);
    }
    std::sort(tvs.begin(), tvs.end());
    const auto idx = static_cast<std::size_t>(std::ceil(q * resamples)) - 1;
    return tvs[std::min(idx, tvs.size() - 1)];
}

TwoSampleResult goodness_of_fit(const Counts& counts, const std::map<std::string, double>& law)
{
    const long n = total_count(counts);
    if (n == 0)
        throw std::invalid_argument("goodness of fit needs a nonempty sample");
    for (const auto& kv : counts)
        if (!law.count(kv.first) && kv.second > 0)
            throw std::invalid_argument("sample outside the support of the law");
    TwoSampleResult r;
    std::vector<std::pair<double, double>> cells;  // observed, expected
    double po = 0, pe = 0;
    for (const auto& [k, p] : law) {
        const double o = counts.count(k) ? static_cast<double>(counts.at(k)) : 0.0;
        const double e = p * n;
        r.tv += 0.5 * std::abs(o / n - p);
        if (e < 5) {
            po += o;
            pe += e;
            if (pe >= 5) {
                cells.push_back({po, pe});
                po = pe = 0;
            }
        } else {
            cells.push_back({o, e});
        }
    }
    if (pe > 0 || po > 0) {
        if (cells.empty())
            cells.push_back({po, pe});
        else {
            cells.back().first += po;
            cells.back().second += pe;
        }
    }
    for (const auto& [o, e] : cells)
        r.chi2 += (o - e) * (o - e) / e;
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = chi2_sf(r.chi2, r.dof);
    return r;
}

double ks_critical(double alpha, long n)
{
    if (n <= 0)
        throw std::invalid_argument("KS needs a nonempty sample");
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

double kolmogorov_sf(double x)
{
    if (x <= 0.0)
        return 1.0;
    if (x < 0.2)
        return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-17)
            break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    const long n = static_cast<long>(samples.size());
    if (n == 0)
        throw std::invalid_argument("KS needs a nonempty sample");
    std::sort(samples.begin(), samples.end());
    KsResult r;
    for (long i = 0; i < n; ++i) {
        const double f = cdf(samples[static_cast<std::size_t>(i)]);
        r.d = std::max({r.d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    r.crit_01 = ks_critical(0.01, n);
    r.crit_001 = ks_critical(0.001, n);
    r.p_value = kolmogorov_sf(r.d * std::sqrt(static_cast<double>(n)));
    return r;
}

TestReport ks_one_sample(const std::string& id, std::vector<double> samples,
                         const std::function<double(double)>& cdf, double alpha)
{
    const long n = static_cast<long>(samples.size());
    const KsResult k = ks_statistic(std::move(samples), cdf);
    TestReport rep;
    rep.id = id;
    rep.statistic = k.d;
    rep.threshold = ks_critical(alpha, n);
    rep.sample_sizes = {n};
    rep.pass = k.d < rep.threshold;
    std::ostringstream os;
    os << "p=" << k.p_value;
    rep.detail = os.str();
    return rep;
}

KsResult ks_lattice(const std::vector<long>& samples, const std::function<double(double)>& cdf)
{
    const long n = static_cast<long>(samples.size());
    if (n == 0)
        throw std::invalid_argument("KS needs a nonempty sample");
    std::map<long, long> counts;
    for (long s : samples)
        ++counts[s];
    KsResult r;
    long cum = 0;
    for (const auto& [k, c] : counts) {
        cum += c;
        r.d = std::max(r.d, std::abs(static_cast<double>(cum) / n - cdf(static_cast<double>(k) + 0.5)));
    }
    r.crit_01 = ks_critical(0.01, n);
    r.crit_001 = ks_critical(0.001, n);
    r.p_value = kolmogorov_sf(r.d * std::sqrt(static_cast<double>(n)));
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson needs two equal samples of size >= 2");
    const Eigen::Map<const Eigen::ArrayXd> a(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Eigen::ArrayXd> b(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::ArrayXd da = a - a.mean(), db = b - b.mean();
    return (da * db).sum() / std::sqrt(da.square().sum() * db.square().sum());
}

IndependenceResult independence_stats(const std::vector<double>& x, const std::vector<double>& y,
                                      int permutations, RngStream& rng)
{
    IndependenceResult r;
    r.n = static_cast<long>(x.size());
    r.r_raw = pearson(x, y);
    const bool positive = std::all_of(x.begin(), x.end(), [](double v) { return v > 0; }) &&
                          std::all_of(y.begin(), y.end(), [](double v) { return v > 0; });
    std::vector<double> lx = x, ly = y;
    if (positive) {
        for (auto& v : lx)
            v = std::log(v);
        for (auto& v : ly)
            v = std::log(v);
        r.r_log = pearson(lx, ly);
    } else {
        r.r_log = std::nan("");
        lx = x;
        ly = y;
    }
    const double obs = std::abs(positive ? r.r_log : r.r_raw);
    long exceed = 0;
    std::vector<double> perm = ly;
    for (int p = 0; p < permutations; ++p) {
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        if (std::abs(pearson(lx, perm)) >= obs)
            ++exceed;
    }
    r.perm_p = static_cast<double>(exceed + 1) / (permutations + 1);
    return r;
}

TestReport independence_suite(const std::string& id, const std::vector<double>& x,
                              const std::vector<double>& y, double bound_factor, RngStream& rng,
                              int permutations)
{
    const IndependenceResult s = independence_stats(x, y, permutations, rng);
    TestReport rep;
    rep.id = id;
    rep.statistic = std::isnan(s.r_log) ? std::abs(s.r_raw) : std::max(std::abs(s.r_raw), std::abs(s.r_log));
    rep.threshold = bound_factor / std::sqrt(static_cast<double>(s.n));
    rep.sample_sizes = {s.n};
    rep.pass = rep.statistic < rep.threshold;
    std::ostringstream os;
    os << "r_raw=" << s.r_raw << " r_log=" << s.r_log << " perm_p=" << s.perm_p;
    rep.detail = os.str();
    return rep;
}

ParamSet scale_params(const ParamSet& params, double T)
{
    if (!(T > 0))
        throw std::invalid_argument("temperature must be positive");
    auto scale = [T](const IndexedSequence& s) {
        if (s.is_constant())
            return IndexedSequence::constant(T * s(0));
        std::vector<double> v = s.values();
        for (auto& x : v)
            x *= T;
        return IndexedSequence(s.min_index(), v);
    };
    ParamSet out = params;
    out.psi = scale(params.psi);
    out.phi = scale(params.phi);
    out.theta = scale(params.theta);
    return out;
}

FreeEnergyReport free_energy_formulas(const ParamSet& params, int n, double T)
{
    if (n < 1)
        throw std::invalid_argument("free energy needs n >= 1");
    if (!(T > 0))
        throw std::invalid_argument("temperature must be positive");
    params.validate(n);
    FreeEnergyReport r;
    r.n = n;
    r.T = T;
    double inv_sum = 0.0, tri_sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= k; ++j) {
            const double bar = params.psi(j) + params.phi(j - k);
            const double s = T * bar;
            r.annealed += T * std::log(s);
            r.quenched_mean += T * digamma(s);
            tri_sum += T * T * trigamma(s);
            inv_sum += 1.0 / bar;
        }
    }
    r.variance_formula = tri_sum;
    // 2n(n+1) T^2 Psi_1 in the homogeneous case.
    r.variance_alt = 4.0 * tri_sum;
    const double n2 = static_cast<double>(n) * n;
    r.gap_normalized = (r.annealed - r.quenched_mean) / n2;
    r.gap_lower = inv_sum / (2.0 * n2);
    r.gap_upper = 2.0 * r.gap_lower;
    std::ostringstream os;
    os << "psi(1)=" << params.psi(1) << " phi(0)=" << params.phi(0) << " theta(1)=" << params.theta(1);
    r.params = os.str();
    return r;
}

FreeEnergyReport free_energy_mc(const ParamSet& params, int n, double T, long replicas, RngStream& rng)
{
    if (replicas < 1000)
        throw std::invalid_argument("free energy Monte Carlo needs at least 1000 replicas");
    FreeEnergyReport r = free_energy_formulas(params, n, T);
    const ParamSet pt = scale_params(params, T);
    std::vector<double> f(static_cast<std::size_t>(replicas));
    for (long i = 0; i < replicas; ++i) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
        f[static_cast<std::size_t>(i)] = T * log_partition_product(sample_log_weight_field(pt, n, sub));
    }
    const Eigen::Map<const Eigen::ArrayXd> fa(f.data(), replicas);
    r.replicas = replicas;
    r.mean = fa.mean();
    r.variance = (fa - r.mean).square().sum() / static_cast<double>(replicas - 1);
    const boost::math::normal_distribution<double> z;
    auto cdf = [&z](double x) { return boost::math::cdf(z, x); };
    std::vector<double> g(f.size()), h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        g[i] = (f[i] - r.quenched_mean) / std::sqrt(r.variance_formula);
        h[i] = (f[i] - r.quenched_mean) / std::sqrt(r.variance_alt);
    }
    r.ks = ks_statistic(g, cdf).d;
    r.ks_alt = ks_statistic(h, cdf).d;
    r.ks_crit = ks_critical(1e-3, replicas);
    return r;
}

ScalingFit scaling_exponent(const std::vector<double>& ns, const std::vector<double>& spreads)
{
    if (ns.size() != spreads.size() || ns.size() < 4)
        throw std::invalid_argument("scaling fit needs at least 4 (n, spread) pairs");
    std::set<double> distinct(ns.begin(), ns.end());
    if (distinct.size() < 2)
        throw std::invalid_argument("scaling fit needs distinct sizes");
    const auto k = static_cast<Eigen::Index>(ns.size());
    Eigen::MatrixXd X(k, 2);
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(ns[static_cast<std::size_t>(i)] > 0) || !(spreads[static_cast<std::size_t>(i)] > 0))
            throw std::invalid_argument("scaling fit needs positive sizes and spreads");
        X(i, 0) = 1.0;
        X(i, 1) = std::log(ns[static_cast<std::size_t>(i)]);
        y(i) = std::log(spreads[static_cast<std::size_t>(i)]);
    }
    const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
    ScalingFit f;
    f.intercept = beta(0);
    f.slope = beta(1);
    f.ci_low = f.ci_high = f.slope;
    return f;
}

double sample_sd(const std::vector<double>& x)
{
    if (x.size() < 2)
        throw std::invalid_argument("standard deviation needs two samples");
    const Eigen::Map<const Eigen::ArrayXd> a(x.data(), static_cast<Eigen::Index>(x.size()));
    return std::sqrt((a - a.mean()).square().sum() / static_cast<double>(x.size() - 1));
}

ScalingFit scaling_exponent_bootstrap(const std::vector<double>& ns,
                                      const std::vector<std::vector<double>>& samples, int resamples,
                                      RngStream& rng)
{
    if (ns.size() != samples.size())
        throw std::invalid_argument("one sample per size required");
    std::vector<double> spreads;
    for (const auto& s : samples)
        spreads.push_back(sample_sd(s));
    ScalingFit fit = scaling_exponent(ns, spreads);
    std::vector<double> slopes;
    std::vector<double> tmp;
    for (int r = 0; r < resamples; ++r) {
        std::vector<double> sp;
        for (const auto& s : samples) {
            std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
            tmp.resize(s.size());
            for (auto& v : tmp)
                v = s[pick(rng.engine())];
            sp.push_back(sample_sd(tmp));
        }
        slopes.push_back(scaling_exponent(ns, sp).slope);
    }
    if (!slopes.empty()) {
        std::sort(slopes.begin(), slopes.end());
        fit.ci_low = slopes[static_cast<std::size_t>(0.025 * (slopes.size() - 1))];
        fit.ci_high = slopes[static_cast<std::size_t>(0.975 * (slopes.size() - 1))];
    }
    return fit;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order)
{
    if (order < 1)
        throw std::invalid_argument("quadrature order must be positive");
    // Golub-Welsch: eigenvalues of the Jacobi matrix of the Hermite recurrence.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        J(i, i - 1) = std::sqrt(i / 2.0);
        J(i - 1, i) = J(i, i - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    const double mu0 = std::sqrt(M_PI);
    for (int i = 0; i < order; ++i) {
        x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = mu0 * v * v;
    }
    return {x, w};
}

double normal_expectation(const std::function<double(double)>& f, double mu, double sigma, int order)
{
    const auto [x, w] = gauss_hermite(order);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += w[i] * f(mu + std::sqrt(2.0) * sigma * x[i]);
    return s / std::sqrt(M_PI);
}

} // namespace gda
