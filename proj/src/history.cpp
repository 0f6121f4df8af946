#include "hybridctl/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace hybridctl {

void HistoryBuffer::append(double t, Vec x) {
    if (x.size() != dim_) throw std::invalid_argument("HistoryBuffer::append: dimension mismatch");
    if (!times_.empty() && !(t > times_.back()))
        throw std::logic_error("HistoryBuffer::append: sample times must be strictly increasing");
    times_.push_back(t);
    states_.push_back(std::move(x));
}

void HistoryBuffer::mark_jump(Vec x_plus) {
    if (times_.empty()) throw std::logic_error("HistoryBuffer::mark_jump: empty buffer");
    if (x_plus.size() != dim_) throw std::invalid_argument("HistoryBuffer::mark_jump: dimension mismatch");
    const std::size_t i = times_.size() - 1;
    if (left_values_.count(i)) throw std::logic_error("HistoryBuffer::mark_jump: sample is already a jump");
    left_values_.emplace(i, states_[i]);
    states_[i] = std::move(x_plus);
    jump_times_.push_back(times_[i]);
}

double HistoryBuffer::t_min() const {
    if (times_.empty()) throw std::logic_error("HistoryBuffer: empty buffer");
    return times_.front();
}

double HistoryBuffer::t_max() const {
    if (times_.empty()) throw std::logic_error("HistoryBuffer: empty buffer");
    return times_.back();
}

const Vec& HistoryBuffer::left_state_at(std::size_t i) const {
    auto it = left_values_.find(i);
    return it != left_values_.end() ? it->second : states_[i];
}

std::size_t HistoryBuffer::index_at_or_before(double t) const {
    if (times_.empty()) throw std::logic_error("HistoryBuffer: empty buffer");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) throw std::out_of_range("HistoryBuffer: time before coverage");
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

Vec HistoryBuffer::evaluate(double t, Side side) const {
    if (times_.empty()) throw std::logic_error("HistoryBuffer::evaluate: empty buffer");
    if (t < times_.front() || t > times_.back())
        throw std::out_of_range("HistoryBuffer::evaluate: time outside [t_min, t_max]");

    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
        const std::size_t i = static_cast<std::size_t>(it - times_.begin());
        return side == Side::left ? left_state_at(i) : states_[i];
    }
    const std::size_t seg = static_cast<std::size_t>(it - times_.begin()) - 1;
    return interp_ == Interp::cubic ? interpolate_cubic(seg, t) : interpolate_linear(seg, t);
}

const Vec& HistoryBuffer::block_value(std::size_t i, std::size_t j) const {
    if (j >= i + 1 && is_jump(j)) return left_state_at(j);
    return states_[j];
}

Vec HistoryBuffer::interpolate_linear(std::size_t seg, double t) const {
    const double t0 = times_[seg], t1 = times_[seg + 1];
    const Vec& a = states_[seg];
    const Vec& b = block_value(seg, seg + 1);
    const double w = (t - t0) / (t1 - t0);
    Vec r(dim_);
    for (std::size_t d = 0; d < dim_; ++d) r[d] = a[d] + w * (b[d] - a[d]);
    return r;
}

Vec HistoryBuffer::interpolate_cubic(std::size_t seg, double t) const {
    // Lagrange interpolation on up to four points of the continuous block
    // containing the segment. The stencil never extends across a jump.
    std::size_t lo = seg, hi = seg + 1;
    if (seg > 0 && !is_jump(seg)) lo = seg - 1;
    if (seg + 2 < times_.size() && !is_jump(seg + 1)) hi = seg + 2;

    Vec r(dim_, 0.0);
    for (std::size_t j = lo; j <= hi; ++j) {
        double w = 1.0;
        for (std::size_t m = lo; m <= hi; ++m) {
            if (m == j) continue;
            w *= (t - times_[m]) / (times_[j] - times_[m]);
        }
        const Vec& v = block_value(seg, j);
        for (std::size_t d = 0; d < dim_; ++d) r[d] += w * v[d];
    }
    return r;
}

}  // namespace hybridctl
