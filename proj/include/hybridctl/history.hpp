#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "hybridctl/types.hpp"

namespace hybridctl {

enum class Interp { linear, cubic };
enum class Side { left, right };

/// Piecewise-continuous recorded trajectory with dense interpolation.
///
/// Samples are stored at strictly increasing times. A state jump is stored as
/// a dual-valued sample: the sample keeps the right limit and the left limit
/// is kept aside, so interpolation never bridges a discontinuity (each
/// continuous segment is interpolated independently).
class HistoryBuffer {
public:
    explicit HistoryBuffer(std::size_t dim, Interp interp = Interp::linear)
        : dim_(dim), interp_(interp) {}

    /// Append a sample; t must be strictly greater than the current t_max.
    void append(double t, Vec x);

    /// Convert the most recent sample into a discontinuity: its current value
    /// becomes the left limit and x_plus the right limit.
    void mark_jump(Vec x_plus);

    /// Interpolating evaluation on [t_min, t_max]. At a stored time the stored
    /// value for the requested side is returned exactly.
    Vec evaluate(double t, Side side = Side::right) const;

    bool empty() const { return times_.empty(); }
    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return dim_; }
    Interp interpolation() const { return interp_; }

    double t_min() const;
    double t_max() const;

    double time_at(std::size_t i) const { return times_[i]; }
    /// Right-limit value at sample i (the value the trajectory continues with).
    const Vec& state_at(std::size_t i) const { return states_[i]; }
    bool is_jump(std::size_t i) const { return left_values_.count(i) != 0; }
    /// Left-limit value at sample i (equals state_at unless i is a jump).
    const Vec& left_state_at(std::size_t i) const;

    const std::vector<double>& discontinuities() const { return jump_times_; }

    /// Index of the last sample with time <= t (for window scans).
    std::size_t index_at_or_before(double t) const;

private:
    std::size_t dim_;
    Interp interp_;
    std::vector<double> times_;
    std::vector<Vec> states_;            // right limits
    std::map<std::size_t, Vec> left_values_;  // only where left != right
    std::vector<double> jump_times_;

    Vec interpolate_linear(std::size_t seg, double t) const;
    Vec interpolate_cubic(std::size_t seg, double t) const;
    /// Value of sample j as seen from the continuous block starting at segment
    /// index i (left limit when j closes the block from above).
    const Vec& block_value(std::size_t i, std::size_t j) const;
};

}  // namespace hybridctl
