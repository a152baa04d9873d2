#include "oplab/linalg/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "oplab/errors.hpp"
#include "oplab/linalg/decompositions.hpp"

namespace oplab {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (haveSpare_) {
        haveSpare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    haveSpare_ = true;
    return r * std::cos(t);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix random_gaussian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = s * rng.complex_normal();
    return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    ComplexMatrix g = random_gaussian(n, rng);
    // modified Gram-Schmidt on columns, applied twice for orthogonality to rounding
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj{};
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
            nrm = std::sqrt(nrm);
            for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
        }
    }
    return g;
}

ComplexMatrix random_well_conditioned(std::size_t n, Rng& rng, double spread) {
    ComplexMatrix g = random_gaussian(n, rng);
    g *= spread;
    return ComplexMatrix::identity(n) + g;
}

ComplexMatrix random_normal_with_spectrum(std::span<const Complex> spectrum, Rng& rng) {
    const ComplexMatrix q = random_unitary(spectrum.size(), rng);
    return q * ComplexMatrix::diagonal(spectrum) * q.adjoint();
}

ComplexMatrix random_similar_to_diagonal(std::span<const Complex> spectrum, Rng& rng) {
    const ComplexMatrix h = random_well_conditioned(spectrum.size(), rng);
    return h * ComplexMatrix::diagonal(spectrum) * inverse(h);
}

ComplexMatrix random_invertible(std::size_t n, Rng& rng) {
    for (;;) {
        ComplexMatrix g = random_gaussian(n, rng);
        const SvdResult s = svd(g);
        if (s.sigma.back() > 0.05 * s.sigma.front()) return g;
    }
}

ComplexMatrix random_hyperbolic(std::size_t n, Rng& rng) {
    if (n < 2) throw InvalidArgument("random_hyperbolic: need dimension >= 2");
    const std::size_t stable = n / 2;
    CVector spec(n);
    for (std::size_t i = 0; i < n; ++i) {
        // one modulus per stratum keeps neighbouring moduli apart
        const bool contracting = i < stable;
        const std::size_t slot = contracting ? i : i - stable;
        const std::size_t slots = contracting ? stable : n - stable;
        const double lo = contracting ? 0.2 : 1.25;
        const double width = (contracting ? 0.6 : 2.75) / static_cast<double>(slots);
        const double modulus = lo + width * (static_cast<double>(slot) + rng.uniform(0.2, 0.8));
        spec[i] = std::polar(modulus, rng.uniform(-std::numbers::pi, std::numbers::pi));
    }
    return random_similar_to_diagonal(spec, rng);
}

} // namespace oplab
