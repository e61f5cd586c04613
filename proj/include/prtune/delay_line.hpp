#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace prtune {

/// Fixed-step history of a scalar signal for dead-time realization. One value
/// is pushed per integration step; queries linearly interpolate between grid
/// samples. Times before the first push read as zero (system at rest).
class DelayLine {
   public:
    DelayLine(double delay, double h)
        : h_(h), buf_(std::max<size_t>(4, static_cast<size_t>(std::ceil(delay / h)) + 4), 0.0) {}

    void push(double value) {
        head_ = (head_ + 1) % buf_.size();
        buf_[head_] = value;
        if (count_ < buf_.size()) ++count_;
    }

    /// Signal value dt_behind seconds before the newest push. A non-positive
    /// dt_behind is ahead of the stored history and returns `fallback`.
    double value_behind(double dt_behind, double fallback) const {
        if (dt_behind <= 0.0) return fallback;
        const double steps = dt_behind / h_;
        const size_t k = static_cast<size_t>(steps);
        const double frac = steps - static_cast<double>(k);
        return sample(k) * (1.0 - frac) + sample(k + 1) * frac;
    }

   private:
    double sample(size_t steps_back) const {
        if (steps_back >= count_ || steps_back >= buf_.size()) return 0.0;
        return buf_[(head_ + buf_.size() - steps_back) % buf_.size()];
    }

    double h_;
    std::vector<double> buf_;
    size_t head_ = 0;
    size_t count_ = 0;
};

}  // namespace prtune
