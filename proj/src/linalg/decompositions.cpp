#include "oplab/linalg/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(const Complex& z) { return std::abs(z.real()) + std::abs(z.imag()); }

/// Rotation G = [c s; -conj(s) c] with G [f; g] = [r; 0].
struct Givens {
    double c = 1.0;
    Complex s{};
};

Givens make_givens(Complex f, Complex g) {
    if (g == Complex{}) return {1.0, Complex{}};
    if (f == Complex{}) return {0.0, std::conj(g) / std::abs(g)};
    const double fa = std::abs(f);
    const double rho = std::hypot(fa, std::abs(g));
    return {fa / rho, f * std::conj(g) / (fa * rho)};
}

// M <- G M on rows i, j restricted to columns [c0, c1).
void rotate_rows(ComplexMatrix& m, std::size_t i, std::size_t j, const Givens& g, std::size_t c0,
                 std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
        const Complex xi = m(i, c);
        const Complex xj = m(j, c);
        m(i, c) = g.c * xi + g.s * xj;
        m(j, c) = -std::conj(g.s) * xi + g.c * xj;
    }
}

// M <- M G^H on columns i, j restricted to rows [r0, r1).
void rotate_cols(ComplexMatrix& m, std::size_t i, std::size_t j, const Givens& g, std::size_t r0,
                 std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
        const Complex xi = m(r, i);
        const Complex xj = m(r, j);
        m(r, i) = g.c * xi + std::conj(g.s) * xj;
        m(r, j) = -g.s * xi + g.c * xj;
    }
}

void hessenberg_reduce(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.dim();
    if (n < 3) return;
    CVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tailNorm2 = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tailNorm2 += std::norm(h(i, k));
        if (tailNorm2 == 0.0) continue;

        const Complex x0 = h(k + 1, k);
        const double alpha = std::sqrt(tailNorm2 + std::norm(x0));
        const Complex phase = (x0 == Complex{}) ? Complex(1.0) : x0 / std::abs(x0);
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] += phase * alpha;
        double vn2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vn2 += std::norm(v[i]);
        const double beta = 2.0 / vn2;

        // Left: rows k+1.., all columns from k.
        for (std::size_t c = k; c < n; ++c) {
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, c);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= v[i] * s;
        }
        // Right: columns k+1.. of H and Q.
        auto apply_right = [&](ComplexMatrix& m) {
            for (std::size_t r = 0; r < n; ++r) {
                Complex s{};
                for (std::size_t i = k + 1; i < n; ++i) s += m(r, i) * v[i];
                s *= beta;
                for (std::size_t i = k + 1; i < n; ++i) m(r, i) -= s * std::conj(v[i]);
            }
        };
        apply_right(h);
        apply_right(q);
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
    }
}

Complex wilkinson_shift(const ComplexMatrix& t, std::size_t iu, int iter) {
    if ((iter == 10 || iter == 20) && iu >= 2) {
        return std::abs(t(iu, iu - 1).real()) + std::abs(t(iu - 1, iu - 2).real());
    }
    Complex a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
    const double normt = abs1(a) + abs1(b) + abs1(c) + abs1(d);
    if (normt == 0.0) return Complex{};
    a /= normt;
    b /= normt;
    c /= normt;
    d /= normt;
    const Complex bc = b * c;
    const Complex diff = a - d;
    const Complex disc = std::sqrt(diff * diff + 4.0 * bc);
    const Complex det = a * d - bc;
    const Complex trace = a + d;
    Complex ev1 = (trace + disc) / 2.0;
    Complex ev2 = (trace - disc) / 2.0;
    if (abs1(ev1) > abs1(ev2)) {
        ev2 = det / ev1;
    } else if (abs1(ev2) != 0.0) {
        ev1 = det / ev2;
    }
    return normt * ((abs1(ev1 - d) < abs1(ev2 - d)) ? ev1 : ev2);
}

void reduce_to_triangular(ComplexMatrix& t, ComplexMatrix& q, std::size_t maxIter) {
    const std::size_t n = t.dim();
    const double normA = frobenius_norm(t);
    auto negligible = [&](std::size_t i) { // tests t(i+1, i)
        const double sd = abs1(t(i + 1, i));
        const double d = abs1(t(i, i)) + abs1(t(i + 1, i + 1));
        return sd <= kEps * d || sd <= kEps * kEps * normA;
    };

    std::size_t iu = n - 1;
    int iter = 0;
    std::size_t total = 0;
    while (true) {
        while (iu > 0) {
            if (!negligible(iu - 1)) break;
            t(iu, iu - 1) = Complex{};
            iter = 0;
            --iu;
        }
        if (iu == 0) break;
        ++iter;
        if (++total > maxIter) {
            throw NonConvergence("schur_decompose: QR iteration exceeded " + std::to_string(maxIter) +
                                 " sweeps");
        }
        std::size_t il = iu - 1;
        while (il > 0 && !negligible(il - 1)) --il;

        const Complex shift = wilkinson_shift(t, iu, iter);
        Givens g = make_givens(t(il, il) - shift, t(il + 1, il));
        rotate_rows(t, il, il + 1, g, il, n);
        rotate_cols(t, il, il + 1, g, 0, std::min(il + 2, iu) + 1);
        rotate_cols(q, il, il + 1, g, 0, n);

        for (std::size_t i = il + 1; i < iu; ++i) {
            g = make_givens(t(i, i - 1), t(i + 1, i - 1));
            rotate_rows(t, i, i + 1, g, i - 1, n);
            t(i + 1, i - 1) = Complex{};
            rotate_cols(t, i, i + 1, g, 0, std::min(i + 2, iu) + 1);
            rotate_cols(q, i, i + 1, g, 0, n);
        }
    }
}

// Exchanges the adjacent diagonal entries k and k+1 of the triangular factor.
void swap_adjacent(ComplexMatrix& t, ComplexMatrix& q, std::size_t k) {
    const std::size_t n = t.dim();
    const Complex t11 = t(k, k), t22 = t(k + 1, k + 1);
    Complex v1 = t(k, k + 1), v2 = t22 - t11;
    const double nv = std::hypot(std::abs(v1), std::abs(v2));
    if (nv == 0.0) return;
    v1 /= nv;
    v2 /= nv;
    // Z = [v, v_perp]; first column is the eigenvector of the block for t22.
    const Complex z00 = v1, z01 = -std::conj(v2), z10 = v2, z11 = std::conj(v1);
    auto right = [&](ComplexMatrix& m) {
        for (std::size_t r = 0; r < n; ++r) {
            const Complex a = m(r, k), b = m(r, k + 1);
            m(r, k) = a * z00 + b * z10;
            m(r, k + 1) = a * z01 + b * z11;
        }
    };
    right(t);
    right(q);
    for (std::size_t c = 0; c < n; ++c) {
        const Complex a = t(k, c), b = t(k + 1, c);
        t(k, c) = std::conj(z00) * a + std::conj(z10) * b;
        t(k + 1, c) = std::conj(z01) * a + std::conj(z11) * b;
    }
    t(k + 1, k) = Complex{};
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
}

double normalized_arg(const Complex& z) {
    const double a = std::arg(z);
    return (a <= -std::numbers::pi + 1e-12) ? std::numbers::pi : a;
}

/// Rotation acting on columns (p, q) that annihilates the (p, q) entry of the
/// Hermitian 2x2 block [[alpha, gamma], [conj(gamma), beta]]:
///   new_p = c * col_p - s * ph * col_q,  new_q = s * col_p + c * ph * col_q.
struct JacobiRotation {
    double c;
    double s;
    Complex ph;
};

JacobiRotation jacobi_rotation(double alpha, double beta, Complex gamma) {
    const double g = std::abs(gamma);
    const double zeta = (beta - alpha) / (2.0 * g);
    const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, c * t, std::conj(gamma) / g};
}

void apply_jacobi_cols(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& j) {
    for (std::size_t r = 0; r < m.dim(); ++r) {
        const Complex a = m(r, p), b = m(r, q);
        m(r, p) = j.c * a - j.s * j.ph * b;
        m(r, q) = j.s * a + j.c * j.ph * b;
    }
}

void apply_jacobi_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& j) {
    const Complex phc = std::conj(j.ph);
    for (std::size_t c = 0; c < m.dim(); ++c) {
        const Complex a = m(p, c), b = m(q, c);
        m(p, c) = j.c * a - j.s * phc * b;
        m(q, c) = j.s * a + j.c * phc * b;
    }
}

// Completes columns `missing` of u to an orthonormal basis.
void complete_orthonormal(ComplexMatrix& u, const std::vector<bool>& missing) {
    const std::size_t n = u.dim();
    std::size_t nextBasis = 0;
    for (std::size_t col = 0; col < n; ++col) {
        if (!missing[col]) continue;
        while (true) {
            if (nextBasis >= n) throw NonConvergence("svd: failed to complete singular basis");
            CVector cand(n);
            cand[nextBasis++] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t other = 0; other < n; ++other) {
                    if (other == col || (missing[other] && other > col)) continue;
                    Complex proj{};
                    for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, other)) * cand[i];
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, other);
                }
            }
            const double nc = norm2(cand);
            if (nc < 0.5) continue;
            for (std::size_t i = 0; i < n; ++i) u(i, col) = cand[i] / nc;
            break;
        }
    }
}

} // namespace

bool eigenvalue_order(const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max({1.0, ma, mb})) return ma > mb;
    return normalized_arg(a) < normalized_arg(b) - 1e-12;
}

SchurForm schur_decompose(const ComplexMatrix& a, double tol, const SchurOptions& opts) {
    require_finite_square(a, "schur_decompose");
    const std::size_t n = a.dim();
    ComplexMatrix t = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    hessenberg_reduce(t, q);
    reduce_to_triangular(t, q, opts.sweepsPerDim * n);

    for (std::size_t pass = 0; pass < n; ++pass) {
        bool swapped = false;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (eigenvalue_order(t(k + 1, k + 1), t(k, k))) {
                swap_adjacent(t, q, k);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) t(i, j) = Complex{};

    const double residual = frobenius_norm(a * q - q * t);
    if (residual > tol * std::max(frobenius_norm(a), 1e-300) && residual > 0.0) {
        throw NonConvergence("schur_decompose: reconstruction residual " + std::to_string(residual) +
                             " exceeds tolerance");
    }

    SchurForm out{std::move(q), std::move(t), CVector(n)};
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = out.upperT(i, i);
    return out;
}

SvdResult svd(const ComplexMatrix& a, double tol, int maxSweeps) {
    require_finite_square(a, "svd");
    const std::size_t n = a.dim();
    ComplexMatrix g = a;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double orthTol = static_cast<double>(n) * kEps;

    bool rotated = true;
    for (int sweep = 0; sweep < maxSweeps && rotated; ++sweep) {
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                Complex gamma{};
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += std::norm(g(i, p));
                    beta += std::norm(g(i, q));
                    gamma += std::conj(g(i, p)) * g(i, q);
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= orthTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const JacobiRotation j = jacobi_rotation(alpha, beta, gamma);
                apply_jacobi_cols(g, p, q, j);
                apply_jacobi_cols(v, p, q, j);
            }
        }
    }
    if (rotated) throw NonConvergence("svd: Jacobi sweeps did not converge");

    std::vector<double> sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(g(i, j));
        sig[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

    SvdResult out{ComplexMatrix(n), std::vector<double>(n), ComplexMatrix(n)};
    const double zeroTol = sig[order[0]] * static_cast<double>(n) * kEps;
    std::vector<bool> missing(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.sigma[k] = sig[j];
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
        if (sig[j] > zeroTol && sig[j] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.u(i, k) = g(i, j) / sig[j];
        } else {
            missing[k] = true;
        }
    }
    if (std::find(missing.begin(), missing.end(), true) != missing.end()) complete_orthonormal(out.u, missing);

    ComplexMatrix usv = out.u;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) usv(i, k) *= out.sigma[k];
    const double residual = frobenius_norm(usv * out.v.adjoint() - a);
    if (residual > tol * std::max(frobenius_norm(a), 1e-300) && residual > 0.0) {
        throw NonConvergence("svd: reconstruction residual exceeds tolerance");
    }
    return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& a, int maxSweeps) {
    require_finite_square(a, "hermitian_eigen");
    const std::size_t n = a.dim();
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = frobenius_norm(h);
    bool converged = (n == 1) || scale == 0.0;
    for (int sweep = 0; sweep < maxSweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(h(p, q));
        if (std::sqrt(off) <= kEps * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex gamma = h(p, q);
                if (std::abs(gamma) <= 1e-300) continue;
                const JacobiRotation j = jacobi_rotation(h(p, p).real(), h(q, q).real(), gamma);
                apply_jacobi_cols(h, p, q, j);
                apply_jacobi_rows_adjoint(h, p, q, j);
                h(p, q) = Complex{};
                h(q, p) = Complex{};
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
                apply_jacobi_cols(v, p, q, j);
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(h(p, q));
        if (std::sqrt(off) > 16.0 * kEps * scale) throw NonConvergence("hermitian_eigen: Jacobi sweeps did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return h(x, x).real() < h(y, y).real(); });
    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = h(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

PolarFactors polar_decompose(const ComplexMatrix& a, double tol) {
    SvdResult s = svd(a, tol);
    const std::size_t n = a.dim();
    if (s.sigma.back() <= tol * s.sigma.front()) {
        throw SingularInput("polar_decompose: smallest singular value " + std::to_string(s.sigma.back()) +
                            " is below tol * ||A||");
    }
    ComplexMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += s.v(i, k) * s.sigma[k] * std::conj(s.v(j, k));
            p(i, j) = acc;
        }
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) = p(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (p(i, j) + std::conj(p(j, i)));
            p(i, j) = avg;
            p(j, i) = std::conj(avg);
        }
    }
    return {s.u * s.v.adjoint(), std::move(p)};
}

ComplexMatrix psd_power(const ComplexMatrix& p, double exponent, double tol) {
    require_finite_square(p, "psd_power");
    if (!(exponent > 0.0 && exponent <= 1.0)) {
        throw InvalidArgument("psd_power: exponent must lie in (0, 1]");
    }
    const std::size_t n = p.dim();
    double pmax = 0.0;
    for (const auto& z : p.data()) pmax = std::max(pmax, std::abs(z));
    const double scale = std::max(1.0, pmax);
    if (max_abs_diff(p, p.adjoint()) > tol * scale) throw NotPSD("psd_power: input is not Hermitian");

    const HermitianEigen e = hermitian_eigen(p);
    if (e.values.front() < -tol * scale) {
        throw NotPSD("psd_power: eigenvalue " + std::to_string(e.values.front()) + " is negative");
    }
    std::vector<double> powered(n);
    for (std::size_t k = 0; k < n; ++k) powered[k] = std::pow(std::max(e.values[k], 0.0), exponent);

    ComplexMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += e.vectors(i, k) * powered[k] * std::conj(e.vectors(j, k));
            q(i, j) = acc;
            q(j, i) = std::conj(acc);
        }
        q(i, i) = q(i, i).real();
    }
    return q;
}

} // namespace oplab
