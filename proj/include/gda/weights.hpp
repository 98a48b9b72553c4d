#ifndef GDA_WEIGHTS_HPP
#define GDA_WEIGHTS_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gda/params.hpp"
#include "gda/rng.hpp"

namespace gda {

template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Weights a_ij, b_ij at a given shuffle level over the index window
// i in [i_min, i_min + rows), j in [j_min, j_min + cols). A full level-n
// field has i_min = j_min = 1 and n x n grids. Entry (i, j) lives at
// grid position (i - i_min, j - j_min).
template <typename Scalar>
struct WeightField
{
    int level = 0;
    int i_min = 1;
    int j_min = 1;
    Grid<Scalar> a;
    Grid<Scalar> b;

    WeightField() = default;
    WeightField(int level_, Grid<Scalar> a_, Grid<Scalar> b_, int i_min_ = 1, int j_min_ = 1)
        : level(level_), i_min(i_min_), j_min(j_min_), a(std::move(a_)), b(std::move(b_))
    {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            throw std::invalid_argument("weight grids a and b differ in shape");
    }

    static WeightField constant(int n, Scalar av, Scalar bv)
    {
        return WeightField(n, Grid<Scalar>::Constant(n, n, av), Grid<Scalar>::Constant(n, n, bv));
    }

    int rows() const { return static_cast<int>(a.rows()); }
    int cols() const { return static_cast<int>(a.cols()); }
    int i_max() const { return i_min + rows() - 1; }
    int j_max() const { return j_min + cols() - 1; }
    bool is_full() const { return i_min == 1 && j_min == 1 && rows() == level && cols() == level; }

    Scalar A(int i, int j) const { return a(i - i_min, j - j_min); }
    Scalar B(int i, int j) const { return b(i - i_min, j - j_min); }
    Scalar& A(int i, int j) { return a(i - i_min, j - j_min); }
    Scalar& B(int i, int j) { return b(i - i_min, j - j_min); }

    // a / (a + b) and a + b
    Scalar beta(int i, int j) const { return A(i, j) / (A(i, j) + B(i, j)); }
    Scalar gamma(int i, int j) const { return A(i, j) + B(i, j); }

    template <typename Other>
    WeightField<Other> cast() const
    {
        return WeightField<Other>(level, a.template cast<Other>(), b.template cast<Other>(), i_min, j_min);
    }
};

using WeightFieldd = WeightField<double>;

// Level-n field with independent Gamma entries. min_shape guards the
// linear-domain arithmetic downstream.
WeightFieldd sample_weight_field(const ParamSet& params, int n, RngStream& rng,
                                 double min_shape = 0.05);

// Same law over an arbitrary window, used to feed upshuffle.
WeightFieldd sample_weight_window(const ParamSet& params, int level, int i_min, int i_max,
                                  int j_min, int j_max, RngStream& rng, double min_shape = 0.05);

// Entries are log a, log b of a level-n field; no shape floor.
WeightFieldd sample_log_weight_field(const ParamSet& params, int n, RngStream& rng);

// Level n -> level n-1 over the window shrunk by one at the high end.
template <typename Scalar>
WeightField<Scalar> downshuffle(const WeightField<Scalar>& w)
{
    const int r = w.rows() - 1;
    const int c = w.cols() - 1;
    if (r < 0 || c < 0)
        throw std::invalid_argument("downshuffle of an empty window");
    const Grid<Scalar> s = w.a + w.b;
    Grid<Scalar> a = (w.a / s).topLeftCorner(r, c) * s.block(1, 0, r, c);
    Grid<Scalar> b = (w.b / s).block(0, 1, r, c) * s.block(1, 1, r, c);
    return WeightField<Scalar>(w.level - 1, std::move(a), std::move(b), w.i_min, w.j_min);
}

// Level n -> level n+1 over the window shrunk by one at the low end.
template <typename Scalar>
WeightField<Scalar> upshuffle(const WeightField<Scalar>& w)
{
    const int r = w.rows() - 1;
    const int c = w.cols() - 1;
    if (r < 1 || c < 1)
        throw std::invalid_argument("upshuffle window too small");
    const Grid<Scalar> t = w.a.block(1, 1, r, c) + w.b.block(1, 0, r, c);
    const Grid<Scalar> u = w.a.block(0, 1, r, c) + w.b.block(0, 0, r, c);
    Grid<Scalar> a = w.a.block(1, 1, r, c) / t * u;
    Grid<Scalar> b = w.b.block(1, 0, r, c) / t * u;
    return WeightField<Scalar>(w.level + 1, std::move(a), std::move(b), w.i_min + 1, w.j_min + 1);
}

// Log-domain downshuffle: entries are log a, log b.
WeightFieldd log_downshuffle(const WeightFieldd& lw);

// Fields at every level 1..n obtained by repeated downshuffle.
template <typename Scalar>
class Cascade
{
    public:
        explicit Cascade(WeightField<Scalar> top)
        {
            if (!top.is_full() || top.level < 1)
                throw std::invalid_argument("cascade needs a full level-n field with n >= 1");
            const int n = top.level;
            levels_.resize(static_cast<std::size_t>(n));
            levels_[n - 1] = std::move(top);
            for (int k = n - 1; k >= 1; --k)
                levels_[k - 1] = downshuffle(levels_[k]);
        }

        int size() const { return static_cast<int>(levels_.size()); }
        const WeightField<Scalar>& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
        const WeightField<Scalar>& top() const { return levels_.back(); }

    private:
        std::vector<WeightField<Scalar>> levels_;
};

using Cascaded = Cascade<double>;

// Fields at levels n, n-1, ..., 1 (as listed).
template <typename Scalar>
std::vector<WeightField<Scalar>> cascade(const WeightField<Scalar>& w)
{
    Cascade<Scalar> c(w);
    std::vector<WeightField<Scalar>> out;
    for (int k = c.size(); k >= 1; --k)
        out.push_back(c.level(k));
    return out;
}

// log Z_n = sum_k sum_j log(a^[k]_1j + b^[k]_1j).
template <typename Scalar>
Scalar partition_product(const Cascade<Scalar>& c)
{
    using std::log;
    Scalar total = 0;
    for (int k = 1; k <= c.size(); ++k)
        total += (c.level(k).a.row(0) + c.level(k).b.row(0)).log().sum();
    return total;
}

// Same sum computed from a log-domain level-n field, without leaving
// log space. Used when shapes are too small for linear arithmetic.
double log_partition_product(WeightFieldd log_top);

// Column swap of a (+) column (beta) past a (-) column (gamma).
struct SwapResult
{
    Eigen::ArrayXd gamma_hat;
    Eigen::ArrayXd beta_hat;
};
SwapResult vswap_update(const Eigen::ArrayXd& beta, const Eigen::ArrayXd& gamma);

// Downshuffle restricted to one pair of adjacent rows j, j+1: inputs are
// a_{.,j}, b_{.,j}, a_{.,j+1}, b_{.,j+1} over i = 1..m; outputs a^{[m-1]}_{.,j}, b^{[m-1]}_{.,j}.
struct HSwapResult
{
    Eigen::ArrayXd a;
    Eigen::ArrayXd b;
};
HSwapResult hswap_update(const Eigen::ArrayXd& a_j, const Eigen::ArrayXd& b_j,
                         const Eigen::ArrayXd& a_j1, const Eigen::ArrayXd& b_j1);

// Face weights of a level-n Aztec diamond. even(i-1, j-1) is the face with
// left black vertex bk(i,j), i,j in 1..n; odd(i-1, j-1) for i,j in 1..n-1.
struct FaceWeightGrid
{
    Grid<double> even;
    Grid<double> odd;
};

FaceWeightGrid limit_face_weights(const ParamSet& params, int n);
FaceWeightGrid fock_face_weights(const ParamSet& params, int n, double delta);

} // namespace gda

#endif
