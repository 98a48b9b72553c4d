#ifndef GDA_PARAMS_HPP
#define GDA_PARAMS_HPP

#include <vector>

namespace gda {

// Real sequence over a window of integer indices. A constant sequence
// answers every index with its single value.
class IndexedSequence
{
    public:
        IndexedSequence() = default;
        IndexedSequence(int min_index, std::vector<double> values);
        static IndexedSequence constant(double value);

        double operator()(int i) const;
        bool contains(int i) const;
        bool is_constant() const { return constant_; }
        int min_index() const { return min_index_; }
        int max_index() const { return min_index_ + static_cast<int>(values_.size()) - 1; }
        const std::vector<double>& values() const { return values_; }

    private:
        int min_index_ = 1;
        std::vector<double> values_;
        bool constant_ = false;
};

// Parameters (psi_j, phi_j, theta_i, s_i) of the Gamma weight laws:
// at level n, a_ij ~ Gamma(psi_j + theta_i, s_{i-n}) and
// b_ij ~ Gamma(phi_{j-n} - theta_i, s_{i-n}).
struct ParamSet
{
    IndexedSequence psi;
    IndexedSequence phi;
    IndexedSequence theta;
    IndexedSequence s = IndexedSequence::constant(1.0);

    // psi = alpha, phi = beta, theta = 0.
    static ParamSet homogeneous(double alpha, double beta);

    double a_shape(int i, int j) const { return psi(j) + theta(i); }
    double b_shape(int i, int j, int level) const { return phi(j - level) - theta(i); }

    // Throws std::invalid_argument unless every shape used by a level-n
    // field over the given window is at least min_shape (and positive).
    void validate_window(int level, int i_min, int i_max, int j_min, int j_max,
                         double min_shape = 0.0) const;
    void validate(int n, double min_shape = 0.0) const { validate_window(n, 1, n, 1, n, min_shape); }
};

} // namespace gda

#endif
