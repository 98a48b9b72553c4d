#include "gda/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gda/distributions.hpp"

namespace gda {

namespace {

double log_add(double x, double y)
{
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

} // namespace

WeightFieldd sample_weight_window(const ParamSet& params, int level, int i_min, int i_max,
                                  int j_min, int j_max, RngStream& rng, double min_shape)
{
    if (i_max < i_min || j_max < j_min)
        throw std::invalid_argument("empty sampling window");
    params.validate_window(level, i_min, i_max, j_min, j_max, min_shape);
    const int r = i_max - i_min + 1;
    const int c = j_max - j_min + 1;
    Grid<double> a(r, c), b(r, c);
    for (int i = i_min; i <= i_max; ++i) {
        const double scale = params.s(i - level);
        for (int j = j_min; j <= j_max; ++j) {
            a(i - i_min, j - j_min) = sample_gamma(rng, GammaParams(params.a_shape(i, j), scale));
            b(i - i_min, j - j_min) = sample_gamma(rng, GammaParams(params.b_shape(i, j, level), scale));
        }
    }
    return WeightFieldd(level, std::move(a), std::move(b), i_min, j_min);
}

WeightFieldd sample_weight_field(const ParamSet& params, int n, RngStream& rng, double min_shape)
{
    if (n < 1)
        throw std::invalid_argument("diamond size must be positive");
    return sample_weight_window(params, n, 1, n, 1, n, rng, min_shape);
}

WeightFieldd sample_log_weight_field(const ParamSet& params, int n, RngStream& rng)
{
    if (n < 1)
        throw std::invalid_argument("diamond size must be positive");
    params.validate(n);
    Grid<double> la(n, n), lb(n, n);
    for (int i = 1; i <= n; ++i) {
        const double scale = params.s(i - n);
        for (int j = 1; j <= n; ++j) {
            la(i - 1, j - 1) = sample_log_gamma(rng, GammaParams(params.a_shape(i, j), scale));
            lb(i - 1, j - 1) = sample_log_gamma(rng, GammaParams(params.b_shape(i, j, n), scale));
        }
    }
    return WeightFieldd(n, std::move(la), std::move(lb));
}

WeightFieldd log_downshuffle(const WeightFieldd& lw)
{
    const int r = lw.rows() - 1;
    const int c = lw.cols() - 1;
    if (r < 0 || c < 0)
        throw std::invalid_argument("downshuffle of an empty window");
    Grid<double> ls(lw.rows(), lw.cols());
    for (int i = 0; i < lw.rows(); ++i)
        for (int j = 0; j < lw.cols(); ++j)
            ls(i, j) = log_add(lw.a(i, j), lw.b(i, j));
    Grid<double> la = (lw.a - ls).topLeftCorner(r, c) + ls.block(1, 0, r, c);
    Grid<double> lb = (lw.b - ls).block(0, 1, r, c) + ls.block(1, 1, r, c);
    return WeightFieldd(lw.level - 1, std::move(la), std::move(lb), lw.i_min, lw.j_min);
}

double log_partition_product(WeightFieldd lw)
{
    if (!lw.is_full())
        throw std::invalid_argument("log partition needs a full level-n field");
    double total = 0.0;
    for (;;) {
        for (int j = 0; j < lw.cols(); ++j)
            total += log_add(lw.a(0, j), lw.b(0, j));
        if (lw.level == 1)
            break;
        lw = log_downshuffle(lw);
    }
    return total;
}

SwapResult vswap_update(const Eigen::ArrayXd& beta, const Eigen::ArrayXd& gamma)
{
    const Eigen::Index m = beta.size();
    if (m < 1 || gamma.size() != m)
        throw std::invalid_argument("vswap_update needs equal nonempty beta and gamma");
    const Eigen::Index k = m - 1;
    SwapResult out;
    out.gamma_hat = beta.head(k) * gamma.head(k) + (1.0 - beta.tail(k)) * gamma.tail(k);
    out.beta_hat = beta.head(k) * gamma.head(k) / out.gamma_hat;
    return out;
}

HSwapResult hswap_update(const Eigen::ArrayXd& a_j, const Eigen::ArrayXd& b_j,
                         const Eigen::ArrayXd& a_j1, const Eigen::ArrayXd& b_j1)
{
    const Eigen::Index m = a_j.size();
    if (m < 1 || b_j.size() != m || a_j1.size() != m || b_j1.size() != m)
        throw std::invalid_argument("hswap_update needs four vectors of equal nonempty length");
    const Eigen::Index k = m - 1;
    const Eigen::ArrayXd s = a_j + b_j;
    const Eigen::ArrayXd s1 = a_j1 + b_j1;
    HSwapResult out;
    out.a = a_j.head(k) / s.head(k) * s.tail(k);
    out.b = b_j1.head(k) / s1.head(k) * s1.tail(k);
    return out;
}

FaceWeightGrid limit_face_weights(const ParamSet& params, int n)
{
    if (n < 1)
        throw std::invalid_argument("diamond size must be positive");
    params.validate(n);
    FaceWeightGrid f;
    f.even.resize(n, n);
    f.odd.resize(n - 1, n - 1);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            f.even(i - 1, j - 1) = (params.psi(j) + params.theta(i)) / (params.phi(j - n) - params.theta(i));
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            f.odd(i - 1, j - 1) = (params.phi(j - n) - params.theta(i + 1))
                                  / (params.psi(j + 1) + params.theta(i + 1));
    return f;
}

FaceWeightGrid fock_face_weights(const ParamSet& params, int n, double delta)
{
    if (n < 1)
        throw std::invalid_argument("diamond size must be positive");
    params.validate(n);
    // alpha_j = -psi_j, gamma_i = theta_i, beta_j = phi_{j-n}, all below delta
    for (int j = 1; j <= n; ++j)
        if (!(delta > params.phi(j - n)))
            throw std::invalid_argument("Fock parameter delta must exceed every phi, got delta = "
                                        + std::to_string(delta));
    FaceWeightGrid f;
    f.even.resize(n, n);
    f.odd.resize(n - 1, n - 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double al = -params.psi(j), ga = params.theta(i), be = params.phi(j - n);
            f.even(i - 1, j - 1) = (ga - al) * (delta - be) / ((delta - al) * (be - ga));
        }
    }
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) {
            const double al1 = -params.psi(j + 1), ga1 = params.theta(i + 1), be = params.phi(j - n);
            f.odd(i - 1, j - 1) = (be - ga1) * (delta - al1) / ((delta - be) * (ga1 - al1));
        }
    }
    return f;
}

} // namespace gda
