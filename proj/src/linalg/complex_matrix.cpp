#include "oplab/linalg/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

void check_dim(std::size_t dim) {
    if (dim == 0 || dim > ComplexMatrix::kMaxDim) {
        throw InvalidArgument("matrix dimension " + std::to_string(dim) + " outside [1, " +
                              std::to_string(ComplexMatrix::kMaxDim) + "]");
    }
}

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument("matrix dimension mismatch");
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> rowMajor)
    : dim_(dim), data_(std::move(rowMajor)) {
    check_dim(dim);
    if (data_.size() != dim * dim) {
        throw InvalidArgument("expected " + std::to_string(dim * dim) + " entries, got " +
                              std::to_string(data_.size()));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
    check_dim(dim_);
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw InvalidArgument("matrix literal is not square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    check_same_dim(*this, rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    check_same_dim(*this, rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    check_same_dim(lhs, rhs);
    const std::size_t n = lhs.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += a * rhs(k, j);
        }
    }
    return r;
}

CVector operator*(const ComplexMatrix& m, const CVector& v) {
    if (v.size() != m.dim()) throw InvalidArgument("matrix-vector dimension mismatch");
    CVector r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < m.dim(); ++j) acc += m(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    require_finite_square(a, "inverse");
    const std::size_t n = a.dim();
    ComplexMatrix lu = a;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    const double scale = frobenius_norm(a);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
        if (std::abs(lu(piv, col)) <= 1e-14 * scale) {
            throw SingularInput("inverse: matrix is numerically singular");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(piv, j), lu(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const Complex d = lu(col, col);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = lu(r, col) / d;
            if (f == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                lu(r, j) -= f * lu(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        const Complex d = lu(r, r);
        for (std::size_t j = 0; j < n; ++j) inv(r, j) /= d;
    }
    return inv;
}

void require_finite_square(const ComplexMatrix& a, const char* op) {
    if (a.empty()) throw InvalidArgument(std::string(op) + ": empty matrix");
    if (!a.all_finite()) throw InvalidArgument(std::string(op) + ": non-finite entry");
}

double norm2(const CVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

CVector operator+(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw InvalidArgument("vector size mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

CVector operator-(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw InvalidArgument("vector size mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

CVector operator*(Complex s, const CVector& v) {
    CVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

Complex dot(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw InvalidArgument("vector size mismatch");
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace oplab
