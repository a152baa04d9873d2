#include "oplab/linalg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oplab/errors.hpp"

namespace oplab {

double operator_norm(const ComplexMatrix& a, double tol) {
    require_finite_square(a, "operator_norm");
    if (!(tol > 0.0)) throw InvalidArgument("operator_norm: tol must be positive");
    double amax = 0.0;
    for (const auto& z : a.data()) amax = std::max(amax, std::abs(z));
    if (amax == 0.0) return 0.0;
    ComplexMatrix scaled = a;
    scaled *= 1.0 / amax;
    const HermitianEigen e = hermitian_eigen(scaled.adjoint() * scaled);
    return amax * std::sqrt(std::max(e.values.back(), 0.0));
}

double gelfand_radius(const ComplexMatrix& a, int doublings, double tol) {
    if (doublings < 0 || doublings > 30) throw InvalidArgument("gelfand_radius: doublings must lie in [0, 30]");
    const double n0 = frobenius_norm(a);
    if (n0 == 0.0) return 0.0;
    ComplexMatrix b = a;
    b *= 1.0 / n0;
    double logScale = std::log(n0); // A^(2^j) = exp(logScale) * b
    for (int j = 0; j < doublings; ++j) {
        b = b * b;
        const double nb = frobenius_norm(b);
        if (nb == 0.0) return 0.0;
        b *= 1.0 / nb;
        logScale = 2.0 * logScale + std::log(nb);
    }
    const double nb = operator_norm(b, tol);
    if (nb == 0.0) return 0.0;
    return std::exp((logScale + std::log(nb)) / std::ldexp(1.0, doublings));
}

CVector eigenvalues(const ComplexMatrix& a) { return schur_decompose(a).eigenvalues; }

double spectral_radius(const ComplexMatrix& a) {
    const CVector ev = eigenvalues(a);
    return std::abs(ev.front());
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    auto directed = [](std::span<const Complex> from, std::span<const Complex> to) {
        double worst = 0.0;
        for (const auto& z : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& w : to) best = std::min(best, std::abs(z - w));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double unit_circle_gap(std::span<const Complex> spectrum) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& z : spectrum) gap = std::min(gap, std::abs(std::abs(z) - 1.0));
    return gap;
}

bool is_hyperbolic(const ComplexMatrix& a, double tol) {
    const CVector ev = eigenvalues(a);
    if (std::abs(ev.back()) <= 1e-14 * std::abs(ev.front())) return false;
    return unit_circle_gap(ev) >= tol;
}

namespace {

// Solves T11 X - X T22 = C for upper-triangular T11 (u x u) and T22 (s x s).
// X is stored row-major as u x s.
std::vector<Complex> solve_triangular_sylvester(const ComplexMatrix& t, std::size_t u,
                                                const std::vector<Complex>& c) {
    const std::size_t n = t.dim();
    const std::size_t s = n - u;
    std::vector<Complex> x(u * s);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t ii = u; ii-- > 0;) {
            Complex rhs = c[ii * s + j];
            for (std::size_t k = ii + 1; k < u; ++k) rhs -= t(ii, k) * x[k * s + j];
            for (std::size_t k = 0; k < j; ++k) rhs += x[ii * s + k] * t(u + k, u + j);
            x[ii * s + j] = rhs / (t(ii, ii) - t(u + j, u + j));
        }
    }
    return x;
}

// max_k ||M_k|| for k in [0, kmax] where M_0 = start and M_{k+1} is M_k
// multiplied by `step` on the given side. Stops once the running maximum has
// not grown for `patience` consecutive powers (after a minimum of minK).
double power_bound(const ComplexMatrix& step, const ComplexMatrix& start, bool stepOnLeft, int minK, int kmax,
                   int patience, int& checked) {
    ComplexMatrix cur = start;
    double best = operator_norm(cur);
    int sinceGrowth = 0;
    checked = 0;
    for (int k = 1; k <= kmax; ++k) {
        cur = stepOnLeft ? step * cur : cur * step;
        const double nk = operator_norm(cur);
        checked = k;
        if (nk > best * (1.0 + 1e-12)) {
            best = nk;
            sinceGrowth = 0;
        } else {
            ++sinceGrowth;
        }
        if (k >= minK && sinceGrowth >= patience) break;
    }
    return best;
}

} // namespace

SpectralSplit spectral_split(const ComplexMatrix& a, double tol) {
    const SchurForm sf = schur_decompose(a);
    const std::size_t n = a.dim();
    const CVector& ev = sf.eigenvalues;
    if (std::abs(ev.back()) <= 1e-14 * std::abs(ev.front())) {
        throw SingularInput("spectral_split: operator is not invertible");
    }
    for (const auto& z : ev) {
        if (std::abs(std::abs(z) - 1.0) < tol) {
            throw NotHyperbolic("spectral_split: eigenvalue of modulus " + std::to_string(std::abs(z)) +
                                " within tolerance of the unit circle");
        }
    }
    std::size_t u = 0;
    while (u < n && std::abs(ev[u]) > 1.0) ++u;

    SpectralSplit out;
    out.unstableDim = u;
    out.stableDim = n - u;
    out.stableRate = (u < n) ? std::abs(ev[u]) : 0.0;
    out.unstableRate = (u > 0) ? std::abs(ev[u - 1]) : std::numeric_limits<double>::infinity();

    // Block-diagonalize T = S diag(T11, T22) S^{-1} with S = [[I, X], [0, I]];
    // then P_u = Q [[I, -X], [0, 0]] Q*.
    ComplexMatrix x(n); // X stored in the (0, u) block
    if (u > 0 && u < n) {
        const std::size_t s = n - u;
        std::vector<Complex> rhs(u * s);
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = 0; j < s; ++j) rhs[i * s + j] = -sf.upperT(i, u + j);
        const std::vector<Complex> sol = solve_triangular_sylvester(sf.upperT, u, rhs);
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = 0; j < s; ++j) x(i, u + j) = sol[i * s + j];
    }
    ComplexMatrix blockU(n);
    for (std::size_t i = 0; i < u; ++i) {
        blockU(i, i) = 1.0;
        for (std::size_t j = u; j < n; ++j) blockU(i, j) = -x(i, j);
    }
    out.unstableProjection = sf.unitaryQ * blockU * sf.unitaryQ.adjoint();
    out.stableProjection = ComplexMatrix::identity(n) - out.unstableProjection;

    // The bound is measured in the Schur basis, where the two blocks never mix:
    //   A^k P_s  ~ [[0, X T22^k], [0, T22^k]]
    //   A^-k P_u ~ [[T11^-k, -T11^-k X], [0, 0]]
    // Powering P_s in the original basis would let rounding leak into the
    // unstable block and grow like (rho_u / rho_s)^k.
    constexpr int kMinPowers = 20;
    constexpr int kMaxPowers = 400;
    constexpr int kPatience = 20;
    double bound = 1.0;
    int checkedS = 0, checkedU = 0;
    if (out.stableDim > 0) {
        ComplexMatrix step(n), start(n);
        for (std::size_t i = u; i < n; ++i) {
            start(i, i) = 1.0;
            for (std::size_t j = u; j < n; ++j) step(i, j) = sf.upperT(i, j) / out.stableRate;
        }
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = u; j < n; ++j) start(i, j) = x(i, j);
        bound = std::max(bound, power_bound(step, start, false, kMinPowers, kMaxPowers, kPatience, checkedS));
    }
    if (out.unstableDim > 0) {
        ComplexMatrix t11(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t11(i, j) = (i < u && j < u) ? sf.upperT(i, j) : Complex(i == j);
        const ComplexMatrix t11inv = inverse(t11);
        ComplexMatrix step(n);
        for (std::size_t i = 0; i < u; ++i)
            for (std::size_t j = 0; j < u; ++j) step(i, j) = t11inv(i, j) * out.unstableRate;
        bound = std::max(bound, power_bound(step, blockU, true, kMinPowers, kMaxPowers, kPatience, checkedU));
    }
    out.boundConstant = bound;
    out.checkedPowers = std::max(checkedS, checkedU);
    return out;
}

} // namespace oplab
