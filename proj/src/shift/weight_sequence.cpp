#include "oplab/shift/weight_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

void check_weight(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvalidArgument(std::string("weight sequence: ") + what + " must be positive and finite, got " +
                              std::to_string(v));
    }
}

} // namespace

WeightSequence::WeightSequence(std::int64_t coreStart, std::vector<double> core, double leftTail, double rightTail)
    : coreStart_(coreStart), core_(std::move(core)), left_(leftTail), right_(rightTail) {
    check_weight(left_, "left tail");
    check_weight(right_, "right tail");
    for (double v : core_) check_weight(v, "core weight");

    auto first = std::find_if(core_.begin(), core_.end(), [&](double v) { return v != left_; });
    coreStart_ += first - core_.begin();
    core_.erase(core_.begin(), first);
    while (!core_.empty() && core_.back() == right_) core_.pop_back();
    if (core_.empty() && left_ == right_) coreStart_ = 0;
}

WeightSequence WeightSequence::constant(double c) { return WeightSequence(0, {}, c, c); }

WeightSequence WeightSequence::two_tail(double left, double right, std::int64_t split) {
    return WeightSequence(split, {}, left, right);
}

double WeightSequence::at(std::int64_t n) const noexcept {
    if (n < coreStart_) return left_;
    if (n >= core_end()) return right_;
    return core_[static_cast<std::size_t>(n - coreStart_)];
}

double WeightSequence::inf() const noexcept {
    double m = std::min(left_, right_);
    for (double v : core_) m = std::min(m, v);
    return m;
}

double WeightSequence::sup() const noexcept {
    double m = std::max(left_, right_);
    for (double v : core_) m = std::max(m, v);
    return m;
}

} // namespace oplab
