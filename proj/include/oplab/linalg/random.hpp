#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "oplab/linalg/complex_matrix.hpp"

namespace oplab {

/// Seeded generator with platform-independent output: the engine is
/// mt19937_64 and the distributions are spelled out here rather than taken
/// from <random>, whose distributions differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(); ///< [0, 1)
    double uniform(double lo, double hi);
    double normal();
    Complex complex_normal(); ///< E|z|^2 = 1
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

/// Entries iid complex normal scaled by 1/sqrt(n).
ComplexMatrix random_gaussian(std::size_t n, Rng& rng);

/// Haar-like unitary from Gram-Schmidt on a Gaussian matrix.
ComplexMatrix random_unitary(std::size_t n, Rng& rng);

/// I + (spread / sqrt(n)) G, whose condition number stays moderate for spread <= 0.5.
ComplexMatrix random_well_conditioned(std::size_t n, Rng& rng, double spread = 0.4);

/// Q diag(spectrum) Q* for a random unitary Q.
ComplexMatrix random_normal_with_spectrum(std::span<const Complex> spectrum, Rng& rng);

/// H diag(spectrum) H^{-1} for a random well-conditioned H.
ComplexMatrix random_similar_to_diagonal(std::span<const Complex> spectrum, Rng& rng);

/// Random invertible matrix whose smallest singular value is bounded away from 0.
ComplexMatrix random_invertible(std::size_t n, Rng& rng);

/// Random similarity of a diagonal with floor(n/2) eigenvalue moduli in
/// (0.2, 0.8) and the rest in (1.25, 4), so the unit-circle gap is >= 0.2.
ComplexMatrix random_hyperbolic(std::size_t n, Rng& rng);

} // namespace oplab
