#include "oplab/dynamics/lattice_vector.hpp"

#include <cmath>

#include "oplab/errors.hpp"

namespace oplab {

LatticeVector LatticeVector::basis(std::int64_t m, Complex c) {
    LatticeVector v;
    v.set(m, c);
    return v;
}

Complex LatticeVector::at(std::int64_t n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? Complex{} : it->second;
}

void LatticeVector::set(std::int64_t n, Complex c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw InvalidArgument("lattice vector coefficients must be finite");
    }
    if (c == Complex{}) {
        coeffs_.erase(n);
    } else {
        coeffs_[n] = c;
    }
}

void LatticeVector::add(std::int64_t n, Complex c) { set(n, at(n) + c); }

double LatticeVector::norm() const {
    // scaled sum of squares
    double scale = 0.0;
    for (const auto& [n, c] : coeffs_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& [n, c] : coeffs_) s += std::norm(c / scale);
    return scale * std::sqrt(s);
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& rhs) {
    for (const auto& [n, c] : rhs.coeffs_) add(n, c);
    return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& rhs) {
    for (const auto& [n, c] : rhs.coeffs_) add(n, -c);
    return *this;
}

LatticeVector& LatticeVector::operator*=(Complex s) {
    if (s == Complex{}) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [n, c] : coeffs_) c *= s;
    return *this;
}

LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
LatticeVector operator*(Complex s, LatticeVector v) { return v *= s; }

LatticeVector apply_shift(const WeightSequence& w, const LatticeVector& x) {
    LatticeVector y;
    for (const auto& [m, c] : x.coefficients()) y.set(m + 1, w.at(m) * c);
    return y;
}

LatticeVector apply_shift_inverse(const WeightSequence& w, const LatticeVector& x) {
    LatticeVector y;
    for (const auto& [m, c] : x.coefficients()) y.set(m - 1, c / w.at(m - 1));
    return y;
}

LatticeVector project_from(const LatticeVector& x, std::int64_t s) {
    LatticeVector y;
    for (auto it = x.coefficients().lower_bound(s); it != x.coefficients().end(); ++it) y.set(it->first, it->second);
    return y;
}

LatticeVector project_below(const LatticeVector& x, std::int64_t s) {
    LatticeVector y;
    for (auto it = x.coefficients().begin(); it != x.coefficients().lower_bound(s); ++it) y.set(it->first, it->second);
    return y;
}

} // namespace oplab
