#include "gda/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "gda/distributions.hpp"

namespace gda {

namespace {

double log_add(double x, double y)
{
    if (std::isinf(x) && x < 0)
        return y;
    if (std::isinf(y) && y < 0)
        return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

} // namespace

PolymerWeights::PolymerWeights(int p, int m)
    : p_(p), m_(m), w_(static_cast<std::size_t>(3 * (p + m) * (p + m)), 0.0)
{
    if (p < 1 || m < 1)
        throw std::invalid_argument("polymer digraph needs p >= 1 and m >= 1");
}

bool PolymerWeights::contains(int x, int y) const
{
    if (y > -1 || y < -m_ - p_)
        return false;
    if (x < 0)
        return x >= -m_ && x + y >= -m_ - p_;
    return x <= std::min(p_ - 1, y + m_ + p_);
}

std::size_t PolymerWeights::idx(int x, int y, char step) const
{
    const int s = step == 'H' ? 0 : (step == 'D' ? 1 : 2);
    return static_cast<std::size_t>(((x + m_) * (p_ + m_) + (-1 - y)) * 3 + s);
}

void PolymerWeights::set(int x, int y, char step, double w)
{
    if (!contains(x, y))
        throw std::out_of_range("polymer vertex outside the digraph");
    w_[idx(x, y, step)] = w;
}

double PolymerWeights::step_weight(int x, int y, char step) const
{
    if (!contains(x, y))
        return 0.0;
    int tx = x, ty = y;
    if (step == 'H') {
        ++tx;
    } else if (step == 'D') {
        if (x >= 0)
            return 0.0;
        ++tx;
        --ty;
    } else if (step == 'V') {
        if (x < 0)
            return 0.0;
        --ty;
    } else {
        return 0.0;
    }
    if (!contains(tx, ty))
        return 0.0;
    return w_[idx(x, y, step)];
}

PolymerWeights bg_weights_from_cascade(const Cascaded& c, int n, int l)
{
    if (l < 1 || l > n || n > c.size())
        throw std::out_of_range("need 1 <= l <= n <= cascade size");
    const int p = n - l + 1;
    const int m = l;
    auto beta = [&](int x, int y) {
        const int lev = n + x + 1, i = l + x + 1, j = -y;
        if (lev < 1 || i > lev || j > lev)
            return 0.5;
        return c.level(lev).beta(i, j);
    };
    auto gamma = [&](int x, int y) {
        const int lev = n - x, i = l + 1, j = -y;
        if (lev < 1 || lev > c.size() || i > lev || j > lev)
            return 1.0;
        return c.level(lev).gamma(i, j);
    };
    return make_bg_weights(p, m, beta, gamma);
}

PolymerWeights glg_weights_from_cascade(const Cascaded& c, int n, int l)
{
    if (l < 1 || l > n || n > c.size())
        throw std::out_of_range("need 1 <= l <= n <= cascade size");
    const int p = n - l + 1;
    const int m = l;
    auto rho = [&](int x, int y) {
        const int lev = n + x + 1, i = -y, j = l + x + 1;
        if (lev < 1 || i > lev || j > lev)
            return 1.0;
        return c.level(lev).A(i, j);
    };
    auto kappa = [&](int x, int y) {
        const int lev = n - x, i = -y, j = l;
        if (lev < 1 || lev > c.size() || i > lev || j > lev)
            return 1.0;
        return 1.0 / c.level(lev).B(i, j);
    };
    return make_glg_weights(p, m, rho, kappa);
}

PathMeasure polymer_exact(const PolymerWeights& w, int guard)
{
    const int p = w.p(), m = w.m();
    if (p > guard || m > guard)
        throw std::invalid_argument("polymer enumeration guard exceeded");
    PathMeasure mu;
    std::set<LatticePoint> occupied;
    PathTuple cur;
    cur.p = p;
    cur.m = m;

    std::function<void(int, double)> next_path;
    std::function<void(int, LatticePoint, std::string&, double)> walk =
        [&](int j, LatticePoint q, std::string& steps, double lw) {
            const LatticePoint target{p - j, -m - j};
            if (q == target) {
                cur.paths.push_back(Path{{-m, -j}, steps});
                next_path(j + 1, lw);
                cur.paths.pop_back();
                return;
            }
            for (char s : {'H', 'D', 'V'}) {
                const double sw = w.step_weight(q.x, q.y, s);
                if (!(sw > 0.0))
                    continue;
                LatticePoint t = q;
                if (s != 'V')
                    ++t.x;
                if (s != 'H')
                    --t.y;
                if (occupied.count(t))
                    continue;
                occupied.insert(t);
                steps.push_back(s);
                walk(j, t, steps, lw + std::log(sw));
                steps.pop_back();
                occupied.erase(t);
            }
        };
    next_path = [&](int j, double lw) {
        if (j > p) {
            mu.entries.push_back({cur, lw, 0.0});
            return;
        }
        const LatticePoint s{-m, -j};
        if (occupied.count(s))
            return;
        occupied.insert(s);
        std::string steps;
        walk(j, s, steps, lw);
        occupied.erase(s);
    };
    next_path(1, 0.0);

    if (mu.entries.empty())
        throw std::logic_error("polymer digraph admits no path tuple");
    double lz = neg_inf;
    for (const auto& e : mu.entries)
        lz = log_add(lz, e.log_weight);
    mu.log_z = lz;
    for (auto& e : mu.entries)
        e.prob = std::exp(e.log_weight - lz);
    return mu;
}

PathMeasure bg_polymer_exact(const PolymerWeights& w) { return polymer_exact(w); }
PathMeasure glg_polymer_exact(const PolymerWeights& w) { return polymer_exact(w); }

std::vector<int> beta_rwre(const ParamSet& params, int T, RngStream& rng)
{
    if (T < 0)
        throw std::invalid_argument("walk horizon must be nonnegative");
    // One walk visits each (y, t) once, so drawing B lazily is a fresh environment.
    std::vector<int> x{-1};
    x.reserve(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t < T; ++t) {
        const int y = x.back();
        const double sa = params.psi(-y) + params.theta(t + 1);
        const double sb = params.phi(-y - t - 1) - params.theta(t + 1);
        if (!(sa > 0.0) || !(sb > 0.0))
            throw std::invalid_argument("inadmissible parameters for the Beta walk");
        const double b = sample_beta(rng, BetaParams(sa, sb));
        x.push_back(rng.uniform() < b ? y : y - 1);
    }
    return x;
}

void fill_partition_table(StatPolymerEnv& env)
{
    const int n = env.n;
    env.lz.resize(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (env.model == StatModel::LogGamma) {
                double acc = (i == 0 && j == 0) ? 0.0 : neg_inf;
                if (i > 0)
                    acc = log_add(acc, env.lz(i - 1, j));
                if (j > 0)
                    acc = log_add(acc, env.lz(i, j - 1));
                env.lz(i, j) = env.y(i, j) + acc;
            } else {
                double acc = (i == 0 && j == 0) ? 0.0 : neg_inf;
                if (i > 0)
                    acc = log_add(acc, env.lz(i - 1, j) + env.h(i - 1, j));
                if (j > 0)
                    acc = log_add(acc, env.lz(i, j - 1) + env.v(i, j - 1));
                env.lz(i, j) = acc;
            }
        }
    }
}

StatPolymerEnv stat_loggamma(int n, double alpha, double beta, RngStream& rng)
{
    if (n < 1 || n > 4096)
        throw std::invalid_argument("stationary polymer size must lie in 1..4096");
    const GammaParams gb(beta), ga(alpha), gab(alpha + beta);
    StatPolymerEnv env{StatModel::LogGamma, n, Grid<double>(n + 1, n + 1), {}, {}, {}};
    // Inverse-Gamma weights: log Y = -log G.
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            if (i == 0 && j == 0)
                env.y(i, j) = 0.0;
            else if (j == 0)
                env.y(i, j) = -sample_log_gamma(rng, gb);
            else if (i == 0)
                env.y(i, j) = -sample_log_gamma(rng, ga);
            else
                env.y(i, j) = -sample_log_gamma(rng, gab);
        }
    }
    fill_partition_table(env);
    return env;
}

StatPolymerEnv stat_strictweak(int n, double alpha, double beta, RngStream& rng)
{
    if (n < 1 || n > 4096)
        throw std::invalid_argument("stationary polymer size must lie in 1..4096");
    const GammaParams ga(alpha), gab(alpha + beta);
    const BetaParams bba(beta, alpha);
    StatPolymerEnv env{StatModel::StrictWeak, n, {}, Grid<double>(n + 1, n + 1), Grid<double>::Zero(n + 1, n + 1), {}};
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i)
            env.h(i, j) = sample_log_gamma(rng, j == 0 ? gab : ga);
    for (int j = 0; j < n; ++j)
        env.v(0, j) = -sample_log_beta_pair(rng, bba).first;
    fill_partition_table(env);
    return env;
}

namespace {

// log of the weight picked up when arriving at (i, j) from the left/below.
double arrive_left(const StatPolymerEnv& env, int i, int j)
{
    return env.model == StatModel::LogGamma ? env.lz(i - 1, j) : env.lz(i - 1, j) + env.h(i - 1, j);
}

double arrive_below(const StatPolymerEnv& env, int i, int j)
{
    return env.model == StatModel::LogGamma ? env.lz(i, j - 1) : env.lz(i, j - 1) + env.v(i, j - 1);
}

} // namespace

UpRightPath sample_path_backward(const StatPolymerEnv& env, int mx, int ny, RngStream& rng)
{
    if (mx < 0 || ny < 0 || mx > env.n || ny > env.n)
        throw std::out_of_range("endpoint outside the environment");
    UpRightPath rev{{mx, ny}};
    int i = mx, j = ny;
    while (i > 0 || j > 0) {
        bool left;
        if (i == 0)
            left = false;
        else if (j == 0)
            left = true;
        else {
            const double a = arrive_left(env, i, j), b = arrive_below(env, i, j);
            left = rng.uniform() < 1.0 / (1.0 + std::exp(b - a));
        }
        if (left)
            --i;
        else
            --j;
        rev.push_back({i, j});
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

std::string path_steps(const UpRightPath& p)
{
    std::string s;
    for (std::size_t t = 1; t < p.size(); ++t)
        s += p[t].x > p[t - 1].x ? 'R' : 'U';
    return s;
}

std::map<std::string, double> stat_path_law(const StatPolymerEnv& env, int mx, int ny)
{
    if (mx + ny > 16)
        throw std::invalid_argument("path enumeration limited to 16 steps");
    std::map<std::string, double> lw;
    std::string steps;
    std::function<void(int, int, double)> rec = [&](int i, int j, double acc) {
        if (i == mx && j == ny) {
            lw[steps] = acc;
            return;
        }
        if (i < mx) {
            steps.push_back('R');
            const double w = env.model == StatModel::LogGamma ? env.y(i + 1, j) : env.h(i, j);
            rec(i + 1, j, acc + w);
            steps.pop_back();
        }
        if (j < ny) {
            steps.push_back('U');
            const double w = env.model == StatModel::LogGamma ? env.y(i, j + 1) : env.v(i, j);
            rec(i, j + 1, acc + w);
            steps.pop_back();
        }
    };
    rec(0, 0, env.model == StatModel::LogGamma ? env.y(0, 0) : 0.0);
    double lz = neg_inf;
    for (const auto& [k, v] : lw)
        lz = log_add(lz, v);
    std::map<std::string, double> law;
    for (const auto& [k, v] : lw)
        law[k] = std::exp(v - lz);
    return law;
}

int x_mid(const UpRightPath& p, int n)
{
    for (const auto& q : p)
        if (q.x + q.y == n)
            return q.x;
    throw std::invalid_argument("path does not reach the antidiagonal");
}

CrossingStats crossings(const UpRightPath& p, int n, int line_l, int line_k)
{
    const LatticePoint end = p.back();
    if (line_l < 0 || line_l > end.y || line_k < 0 || line_k > end.x)
        throw std::out_of_range("crossing line outside the path's range");
    CrossingStats c;
    c.x_mid = x_mid(p, n);
    c.v0 = c.w0 = std::numeric_limits<int>::max();
    for (const auto& q : p) {
        if (q.y == line_l) {
            c.v0 = std::min(c.v0, q.x);
            c.v1 = std::max(c.v1, q.x);
        }
        if (q.x == line_k) {
            c.w0 = std::min(c.w0, q.y);
            c.w1 = std::max(c.w1, q.y);
        }
    }
    return c;
}

std::map<int, double> edge_gamma_endpoint_law(const EdgeGammaWeights& w)
{
    const int n = w.n;
    if (n < 1 || static_cast<int>(w.a.size()) != n || static_cast<int>(w.b.size()) != n)
        throw std::invalid_argument("edge-Gamma weights need n boundary pairs");
    // f(c, y): log weight of completions from the point at column c (x = c - 1/2).
    auto valid = [n](int x, int y) { return y <= -1 && x >= 0 && y - x >= -n; };
    std::map<int, double> f;  // over y for the current column
    f[-1] = 0.0;
    for (int c = n - 1; c >= 1; --c) {
        std::map<int, double> g;
        const int x = c - 1;
        for (int y = -n - 1; y <= -1; ++y) {
            if (!valid(x, y))
                continue;
            double acc = neg_inf;
            if (f.count(y))
                acc = log_add(acc, f[y]);
            if (f.count(y + 1))
                acc = log_add(acc, f[y + 1]);
            if (std::isinf(acc))
                continue;
            const auto it = w.gamma.find({x, y});
            if (it == w.gamma.end())
                throw std::invalid_argument("edge-Gamma weight missing");
            g[y] = acc - std::log(it->second);
        }
        f = std::move(g);
    }
    std::map<int, double> lw;
    double boundary = 0.0;
    for (int y = -1; y >= -n - 1; --y) {
        if (y <= -2)
            boundary += std::log(w.a[static_cast<std::size_t>(-y - 2)]) - std::log(w.b[static_cast<std::size_t>(-y - 2)]);
        double acc = neg_inf;
        if (f.count(y))
            acc = log_add(acc, f[y]);
        if (f.count(y + 1))
            acc = log_add(acc, f[y + 1]);
        if (!std::isinf(acc))
            lw[y] = acc + boundary;
    }
    double lz = neg_inf;
    for (const auto& [y, v] : lw)
        lz = log_add(lz, v);
    std::map<int, double> law;
    for (const auto& [y, v] : lw)
        law[y] = std::exp(v - lz);
    return law;
}

EdgeGammaWeights edge_gamma_from_cascade(const Cascaded& c)
{
    const int n = c.size();
    EdgeGammaWeights w;
    w.n = n;
    for (int x = 0; x <= n - 2; ++x)
        for (int y = -1; y - x >= -n; --y)
            w.gamma[{x, y}] = c.level(n - x).gamma(2, -y);
    for (int j = 1; j <= n; ++j) {
        w.a.push_back(c.top().A(1, j));
        w.b.push_back(c.top().B(1, j));
    }
    return w;
}

EdgeGammaWeights sample_edge_gamma(int n, double alpha, double beta, RngStream& rng)
{
    EdgeGammaWeights w;
    w.n = n;
    const GammaParams gab(alpha + beta), ga(alpha), gb(beta);
    for (int x = 0; x <= n - 2; ++x)
        for (int y = -1; y - x >= -n; --y)
            w.gamma[{x, y}] = sample_gamma(rng, gab);
    for (int j = 1; j <= n; ++j) {
        w.a.push_back(sample_gamma(rng, ga));
        w.b.push_back(sample_gamma(rng, gb));
    }
    return w;
}

int sample_edge_gamma_endpoint(const EdgeGammaWeights& w, RngStream& rng)
{
    const auto law = edge_gamma_endpoint_law(w);
    double u = rng.uniform();
    for (const auto& [y, p] : law) {
        if (u < p)
            return y;
        u -= p;
    }
    return law.rbegin()->first;
}

namespace {

std::string piece_key(const std::vector<LatticePoint>& pts)
{
    std::string k;
    for (const auto& q : pts)
        k += "(" + std::to_string(q.x) + "," + std::to_string(q.y) + ")";
    return k;
}

} // namespace

RestrictionSamples stationarity_restriction(int M, int N, int m, int n, double alpha, double beta,
                                            long samples, RngStream& rng)
{
    if (m < 1 || n < 1 || m > M || n > N || std::max(M, N) > 64)
        throw std::invalid_argument("need 1 <= m <= M, 1 <= n <= N <= 64");
    RestrictionSamples out;
    const int big = std::max(M, N), small = std::max(m, n);
    for (long s = 0; s < samples; ++s) {
        const StatPolymerEnv eb = stat_loggamma(big, alpha, beta, rng);
        const UpRightPath pb = sample_path_backward(eb, M, N, rng);
        std::vector<LatticePoint> piece;
        for (const auto& q : pb)
            if (q.x >= M - m + 1 && q.y >= N - n + 1)
                piece.push_back({q.x - (M - m), q.y - (N - n)});
        ++out.restricted[piece_key(piece)];

        const StatPolymerEnv es = stat_loggamma(small, alpha, beta, rng);
        const UpRightPath ps = sample_path_backward(es, m, n, rng);
        std::vector<LatticePoint> fresh;
        for (const auto& q : ps)
            if (q.x >= 1 && q.y >= 1)
                fresh.push_back(q);
        ++out.fresh[piece_key(fresh)];
    }
    return out;
}

} // namespace gda
