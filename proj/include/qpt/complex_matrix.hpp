#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qpt/errors.hpp"

namespace qpt {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Dense row-major complex matrix. Dimensions here are tiny (site counts),
// so everything is kept simple and allocation-friendly rather than clever.
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const CMatrix& other) const = default;

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double off_diagonal_frobenius() const {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j) s += std::norm((*this)(i, j));
        return std::sqrt(s);
    }

    // Largest |a_ij - conj(a_ji)| over all entries; 0 for an exactly Hermitian matrix.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVector a_;
};

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("CMatrix multiply: shape mismatch");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline CVector operator*(const CMatrix& a, const CVector& v) {
    if (a.cols() != v.size()) throw ValidationError("CMatrix apply: shape mismatch");
    CVector r(a.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex s(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// a^dagger * v without forming the adjoint.
inline CVector adjoint_apply(const CMatrix& a, const CVector& v) {
    if (a.rows() != v.size()) throw ValidationError("CMatrix adjoint apply: shape mismatch");
    CVector r(a.cols(), Complex(0.0, 0.0));
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Complex s(0.0, 0.0);
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::conj(a(i, j)) * v[i];
        r[j] = s;
    }
    return r;
}

inline double norm2(const CVector& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace qpt
