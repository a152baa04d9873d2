#pragma once

#include <cstdint>
#include <vector>

namespace oplab {

/// Weights of a bilateral weighted shift W e_n = alpha_n e_{n+1} that are
/// constant outside a finite core window:
///   alpha_n = leftTail            for n <  coreStart
///   alpha_n = core[n - coreStart] for coreStart <= n < coreEnd
///   alpha_n = rightTail           for n >= coreEnd
///
/// Always stored in canonical form: the core never starts with the left tail
/// value or ends with the right tail value, and an empty core between equal
/// tails sits at coreStart = 0. Two sequences describing the same weights
/// therefore compare equal.
class WeightSequence {
public:
    WeightSequence(std::int64_t coreStart, std::vector<double> core, double leftTail, double rightTail);

    static WeightSequence constant(double c);
    /// alpha_n = left for n < split, right for n >= split.
    static WeightSequence two_tail(double left, double right, std::int64_t split);

    std::int64_t core_start() const noexcept { return coreStart_; }
    std::int64_t core_end() const noexcept { return coreStart_ + static_cast<std::int64_t>(core_.size()); }
    const std::vector<double>& core() const noexcept { return core_; }
    double left_tail() const noexcept { return left_; }
    double right_tail() const noexcept { return right_; }

    double at(std::int64_t n) const noexcept;

    double inf() const noexcept;
    double sup() const noexcept;
    bool is_constant() const noexcept { return core_.empty() && left_ == right_; }

    friend bool operator==(const WeightSequence&, const WeightSequence&) = default;

private:
    std::int64_t coreStart_;
    std::vector<double> core_;
    double left_;
    double right_;
};

inline double weight_at(const WeightSequence& w, std::int64_t n) { return w.at(n); }

/// The operator itself; invertible because the weights are bounded away from 0.
struct ShiftOperator {
    WeightSequence weights;
};

} // namespace oplab
