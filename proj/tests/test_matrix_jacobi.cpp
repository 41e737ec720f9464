#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qpt/complex_matrix.hpp"
#include "qpt/errors.hpp"
#include "qpt/jacobi.hpp"
#include "support/random_states.hpp"

using namespace qpt;
using Catch::Approx;
using qpt_test::random_hermitian;

TEST_CASE("matrix basics: identity, adjoint and norms") {
    const CMatrix eye = CMatrix::identity(3);
    CHECK(eye(0, 0) == Complex(1.0, 0.0));
    CHECK(eye(0, 1) == Complex(0.0, 0.0));

    CMatrix a(2, 3);
    a(0, 1) = Complex(1.0, 2.0);
    a(1, 2) = Complex(0.0, -3.0);
    const CMatrix ad = a.adjoint();
    CHECK(ad.rows() == 3);
    CHECK(ad.cols() == 2);
    CHECK(ad(1, 0) == Complex(1.0, -2.0));
    CHECK(ad(2, 1) == Complex(0.0, 3.0));

    CMatrix b(2, 2);
    b(0, 0) = 3.0;
    b(0, 1) = 4.0;
    CHECK(b.frobenius_norm() == Approx(5.0).margin(1e-15));
    CHECK(b.off_diagonal_frobenius() == Approx(4.0).margin(1e-15));
    CHECK(b.max_abs() == Approx(4.0).margin(1e-15));
    CHECK(b.hermiticity_defect() == Approx(4.0).margin(1e-15));
    CHECK(random_hermitian(4, 7).hermiticity_defect() == 0.0);
}

TEST_CASE("matrix products validate shapes and match the adjoint") {
    const CMatrix a = random_hermitian(3, 11);
    CHECK_THROWS_AS(a * CMatrix(2, 2), ValidationError);
    CHECK_THROWS_AS(a * CVector(2), ValidationError);

    const CVector v{Complex(0.2, 0.1), Complex(-0.3, 0.4), Complex(0.5, 0.0)};
    const CVector by_adjoint = a.adjoint() * v;
    const CVector direct = adjoint_apply(a, v);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(by_adjoint[i] - direct[i]) < 1e-15);

    CHECK(norm2(CVector{Complex(0.6, 0.0), Complex(0.0, 0.8)}) == Approx(1.0).margin(1e-15));
}

TEST_CASE("eigensolver reproduces a known real symmetric spectrum") {
    CMatrix h(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = 2.0;
    h(1, 0) = 2.0;
    h(1, 1) = -1.0;

    const EigenSystem es = jacobi_eigensystem(h);
    const double root5 = std::sqrt(5.0);
    REQUIRE(es.values.size() == 2);
    CHECK(es.values[0] == Approx(-root5).margin(1e-14));
    CHECK(es.values[1] == Approx(root5).margin(1e-14));

    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            Complex hv(0.0, 0.0);
            for (std::size_t j = 0; j < 2; ++j) hv += h(i, j) * es.vectors(j, k);
            CHECK(std::abs(hv - es.values[k] * es.vectors(i, k)) < 1e-13);
        }
    }
}

TEST_CASE("eigensolver handles complex hermitian input") {
    CMatrix h(2, 2);
    h(0, 1) = Complex(0.0, 1.0);
    h(1, 0) = Complex(0.0, -1.0);

    const EigenSystem es = jacobi_eigensystem(h);
    CHECK(es.values[0] == Approx(-1.0).margin(1e-14));
    CHECK(es.values[1] == Approx(1.0).margin(1e-14));
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            Complex hv(0.0, 0.0);
            for (std::size_t j = 0; j < 2; ++j) hv += h(i, j) * es.vectors(j, k);
            CHECK(std::abs(hv - es.values[k] * es.vectors(i, k)) < 1e-13);
        }
    }
}

TEST_CASE("eigenvector phases make the largest component real and non-negative") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const EigenSystem es = jacobi_eigensystem(random_hermitian(5, seed));
        for (std::size_t k = 0; k < 5; ++k) {
            std::size_t imax = 0;
            double best = 0.0;
            for (std::size_t i = 0; i < 5; ++i) {
                const double m = std::abs(es.vectors(i, k));
                if (m > best) {
                    best = m;
                    imax = i;
                }
            }
            CHECK(es.vectors(imax, k).imag() == 0.0);
            CHECK(es.vectors(imax, k).real() >= 0.0);
        }
    }
}

TEST_CASE("diagonal input is sorted and returned exactly") {
    CMatrix h(3, 3);
    h(0, 0) = 3.0;
    h(1, 1) = 1.0;
    h(2, 2) = 2.0;

    const EigenSystem es = jacobi_eigensystem(h);
    CHECK(es.values[0] == 1.0);
    CHECK(es.values[1] == 2.0);
    CHECK(es.values[2] == 3.0);
    CHECK(es.vectors(1, 0) == Complex(1.0, 0.0));  // value 1 lives on site 1
    CHECK(es.vectors(2, 1) == Complex(1.0, 0.0));
    CHECK(es.vectors(0, 2) == Complex(1.0, 0.0));
}

TEST_CASE("zero matrix yields zero eigenvalues and the identity basis") {
    const EigenSystem es = jacobi_eigensystem(CMatrix(4, 4));
    for (double v : es.values) CHECK(v == 0.0);
    CHECK(es.vectors == CMatrix::identity(4));
}

TEST_CASE("random hermitian matrices decompose accurately up to dimension sixteen") {
    for (std::size_t n = 2; n <= 16; ++n) {
        const CMatrix h = random_hermitian(n, 100 + n);
        const EigenSystem es = jacobi_eigensystem(h);

        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(es.values[k] <= es.values[k + 1]);

        const CMatrix gram = es.vectors.adjoint() * es.vectors;
        double ortho = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Complex want = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                ortho = std::max(ortho, std::abs(gram(i, j) - want));
            }
        CHECK(ortho < 1e-13);

        CMatrix rebuilt(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    rebuilt(i, j) += es.values[k] * es.vectors(i, k) * std::conj(es.vectors(j, k));
        double defect = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                defect = std::max(defect, std::abs(rebuilt(i, j) - h(i, j)));
        CHECK(defect < 1e-12);
    }
}

TEST_CASE("eigensolver output is identical across repeated runs") {
    const CMatrix h = random_hermitian(9, 42);
    const EigenSystem a = jacobi_eigensystem(h);
    const EigenSystem b = jacobi_eigensystem(h);
    CHECK(a.values == b.values);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("eigensolver rejects unsupported shapes") {
    CHECK_THROWS_AS(jacobi_eigensystem(CMatrix(2, 3)), ValidationError);
    CHECK_THROWS_AS(jacobi_eigensystem(CMatrix(0, 0)), ValidationError);
    CHECK_THROWS_AS(jacobi_eigensystem(CMatrix(17, 17)), ValidationError);
}
