#include "gda/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gda {

IndexedSequence::IndexedSequence(int min_index, std::vector<double> values)
    : min_index_(min_index), values_(std::move(values))
{
    if (values_.empty())
        throw std::invalid_argument("parameter sequence is empty");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("parameter sequence has a non-finite entry");
}

IndexedSequence IndexedSequence::constant(double value)
{
    IndexedSequence seq(0, {value});
    seq.constant_ = true;
    return seq;
}

bool IndexedSequence::contains(int i) const
{
    return constant_ || (i >= min_index_ && i <= max_index());
}

double IndexedSequence::operator()(int i) const
{
    if (constant_)
        return values_.front();
    if (!contains(i))
        throw std::out_of_range("parameter index " + std::to_string(i) + " outside ["
                                + std::to_string(min_index_) + ", " + std::to_string(max_index()) + "]");
    return values_[static_cast<std::size_t>(i - min_index_)];
}

ParamSet ParamSet::homogeneous(double alpha, double beta)
{
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("alpha and beta must be positive");
    ParamSet p;
    p.psi = IndexedSequence::constant(alpha);
    p.phi = IndexedSequence::constant(beta);
    p.theta = IndexedSequence::constant(0.0);
    return p;
}

void ParamSet::validate_window(int level, int i_min, int i_max, int j_min, int j_max,
                               double min_shape) const
{
    for (int i = i_min; i <= i_max; ++i) {
        for (int j = j_min; j <= j_max; ++j) {
            const double sa = a_shape(i, j);
            const double sb = b_shape(i, j, level);
            if (!(sa > 0.0) || !(sb > 0.0))
                throw std::invalid_argument("inadmissible parameters at (" + std::to_string(i) + ","
                                            + std::to_string(j) + "): need psi_j+theta_i > 0 and phi_{j-n}-theta_i > 0");
            if (sa < min_shape || sb < min_shape)
                throw std::invalid_argument("shape below " + std::to_string(min_shape) + " at ("
                                            + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (!(s(i - level) > 0.0))
            throw std::invalid_argument("scale parameters must be positive");
    }
}

} // namespace gda
