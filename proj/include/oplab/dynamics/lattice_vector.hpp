#pragma once

#include <cstdint>
#include <map>

#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/shift/weight_sequence.hpp"

namespace oplab {

/// Finitely supported vector of l2(Z) in the canonical basis. Zero
/// coefficients are never stored.
class LatticeVector {
public:
    LatticeVector() = default;

    static LatticeVector basis(std::int64_t m, Complex c = 1.0);

    Complex at(std::int64_t n) const;
    void set(std::int64_t n, Complex c);
    void add(std::int64_t n, Complex c);

    const std::map<std::int64_t, Complex>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::int64_t min_index() const { return coeffs_.begin()->first; }
    std::int64_t max_index() const { return coeffs_.rbegin()->first; }

    double norm() const;

    LatticeVector& operator+=(const LatticeVector& rhs);
    LatticeVector& operator-=(const LatticeVector& rhs);
    LatticeVector& operator*=(Complex s);

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

private:
    std::map<std::int64_t, Complex> coeffs_;
};

LatticeVector operator+(LatticeVector a, const LatticeVector& b);
LatticeVector operator-(LatticeVector a, const LatticeVector& b);
LatticeVector operator*(Complex s, LatticeVector v);

/// T e_m = alpha_m e_{m+1}
LatticeVector apply_shift(const WeightSequence& w, const LatticeVector& x);
/// T^-1 e_m = e_{m-1} / alpha_{m-1}
LatticeVector apply_shift_inverse(const WeightSequence& w, const LatticeVector& x);
/// Coordinate projection onto span{e_n : n >= s}.
LatticeVector project_from(const LatticeVector& x, std::int64_t s);
/// Coordinate projection onto span{e_n : n < s}.
LatticeVector project_below(const LatticeVector& x, std::int64_t s);

} // namespace oplab
