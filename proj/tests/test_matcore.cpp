#include <doctest.h>

#include <cmath>

#include "freeholo/matcore.hpp"
#include "freeholo/rng.hpp"
#include "oracles.hpp"

using namespace freeholo;

namespace {

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("matmul") {
    Rng rng(1);
    const CMatrix a = rng.gaussian(3, 3);
    CHECK((matmul(identity(3), a) - a).norm() == 0.0);
    CHECK((matmul(unit(2, 1, 2), unit(2, 2, 1)) - unit(2, 1, 1)).norm() == 0.0);
    CHECK(matmul(a, zeros(3, 3)).norm() == 0.0);
    const CMatrix b = rng.gaussian(3, 5);
    CHECK((matmul(a, b) - oracle::naive_matmul(a, b)).norm() < 1e-13);
    CHECK_THROWS_AS(matmul(a, rng.gaussian(2, 2)), DimensionError);
}

TEST_CASE("opnorm") {
    CHECK(opnorm(unit(2, 1, 2)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(opnorm(identity(5)) == doctest::Approx(1.0).epsilon(1e-15));
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(opnorm(m2(1, 1, 0, 1)) == doctest::Approx(golden).epsilon(1e-14));
    CHECK(opnorm(m2(1, 1, 0, 1)) == doctest::Approx(oracle::opnorm2(m2(1, 1, 0, 1))).epsilon(1e-14));

    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const CMatrix a = rng.gaussian(2, 2);
        CHECK(opnorm(a) == doctest::Approx(oracle::opnorm2(a)).epsilon(1e-12));
    }
    const CMatrix big = rng.gaussian(40, 40);
    CHECK(opnorm_power(big) == doctest::Approx(opnorm(big)).epsilon(1e-10));
    // Large-n path goes through power iteration.
    CMatrix wide = CMatrix::Zero(300, 300);
    wide(0, 0) = 3.0;
    wide(5, 7) = 2.0;
    CHECK(opnorm(wide) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("solve") {
    Rng rng(3);
    const CMatrix b = rng.gaussian(3, 2);
    CHECK((solve(identity(3), b).x - b).norm() == 0.0);
    CHECK((solve(2.0 * identity(2), identity(2)).x - 0.5 * identity(2)).norm() < 1e-15);
    const CMatrix a = m2(1, 0.5, 0, 1);
    const SolveResult r = solve(a, identity(2));
    CHECK((r.x - m2(1, -0.5, 0, 1)).norm() < 1e-15);
    CHECK((r.x - oracle::inverse2(a)).norm() < 1e-15);
    CHECK(r.residual < 1e-15);
    for (int t = 0; t < 10; ++t) {
        const CMatrix g = rng.gaussian(2, 2);
        CHECK((solve(g, identity(2)).x - oracle::inverse2(g)).norm() < 1e-10 * (1 + oracle::inverse2(g).norm()));
    }
    try {
        solve(m2(1, 1, 1, 1), identity(2));
        FAIL("expected SingularError");
    } catch (const SingularError& e) {
        CHECK(e.rcond() < kSingularityFloor);
    }
}

TEST_CASE("block assembly and direct sums") {
    Rng rng(4);
    const CMatrix a = rng.gaussian(2, 2);
    const CMatrix b = rng.gaussian(3, 3);
    CHECK((kron(identity(2), a) - blkdiag(std::vector<CMatrix>{a, a})).norm() == 0.0);
    CHECK((adjoint(adjoint(a)) - a).norm() == 0.0);
    const CMatrix bd = blkdiag(std::vector<CMatrix>{a, b});
    CHECK(bd.rows() == 5);
    CHECK((bd.block(2, 2, 3, 3) - b).norm() == 0.0);
    CHECK(bd.block(0, 2, 2, 3).norm() == 0.0);

    const CMatrix g = block_assemble({{a, rng.gaussian(2, 3)}, {rng.gaussian(3, 2), b}});
    CHECK(g.rows() == 5);
    CHECK((g.block(0, 0, 2, 2) - a).norm() == 0.0);
    CHECK_THROWS_AS(block_assemble({{a, b}}), DimensionError);
    CHECK_THROWS_AS(block_assemble({{a, a}, {a}}), DimensionError);

    const MatrixTuple x({rng.gaussian(2, 2), rng.gaussian(2, 2)});
    const MatrixTuple y({rng.gaussian(3, 3), rng.gaussian(3, 3)});
    const MatrixTuple s = direct_sum(std::vector<MatrixTuple>{x, y});
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK((s[r] - blkdiag(std::vector<CMatrix>{x[r], y[r]})).norm() == 0.0);
    }
    const MatrixTuple z({rng.gaussian(2, 2)});
    CHECK_THROWS_AS(direct_sum(std::vector<MatrixTuple>{x, z}), DimensionError);
}

TEST_CASE("kron against the definition") {
    Rng rng(5);
    const CMatrix a = rng.gaussian(2, 3);
    const CMatrix b = rng.gaussian(4, 2);
    const CMatrix k = kron(a, b);
    REQUIRE(k.rows() == 8);
    REQUIRE(k.cols() == 6);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int p = 0; p < 4; ++p) {
                for (int q = 0; q < 2; ++q) CHECK(k(i * 4 + p, j * 2 + q) == a(i, j) * b(p, q));
            }
        }
    }
}

TEST_CASE("min_eig_hermitian") {
    CHECK(min_eig_hermitian(identity(3)) == doctest::Approx(1.0));
    CHECK(min_eig_hermitian(m2(3, 0, 0, -2)) == doctest::Approx(-2.0));
    CHECK(min_eig_hermitian(m2(2, 1, 1, 2)) == doctest::Approx(1.0).epsilon(1e-14));
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const CMatrix g = rng.gaussian(2, 2);
        const CMatrix h = g + g.adjoint();
        CHECK(min_eig_hermitian(h) == doctest::Approx(oracle::hermitian_eigs2(h).first).epsilon(1e-12));
    }
    CHECK_THROWS_AS(min_eig_hermitian(m2(1, 1, 0, 1)), Error);
}

TEST_CASE("tuples") {
    CHECK_THROWS_AS(MatrixTuple(std::vector<CMatrix>{}), DimensionError);
    CHECK_THROWS_AS(MatrixTuple({identity(2), identity(3)}), DimensionError);
    CHECK_THROWS_AS(MatrixTuple({CMatrix::Zero(2, 3)}), DimensionError);
    Rng rng(7);
    const MatrixTuple x({rng.gaussian(3, 3), rng.gaussian(3, 3)});
    const CMatrix s = rng.gaussian(3, 3);
    const MatrixTuple c = x.conjugated(s);
    for (std::size_t r = 0; r < 2; ++r) CHECK((c[r] * s - s * x[r]).norm() < 1e-12 * (1 + x[r].norm()) * s.norm());
    const MatrixTuple p = x.compressed(corner_projection(3, 2).leftCols(2));
    CHECK(p.dim() == 2);
    CHECK((p[0] - x[0].topLeftCorner(2, 2)).norm() == 0.0);
    CHECK(MatrixTuple::zeros(2, 4)[1].norm() == 0.0);
}

TEST_CASE("random unitaries and rng determinism") {
    Rng a(42);
    Rng b(42);
    const CMatrix u = random_unitary(4, a);
    const CMatrix v = random_unitary(4, b);
    CHECK((u - v).norm() == 0.0);
    CHECK((u.adjoint() * u - identity(4)).norm() < 1e-13);
    CHECK(trial_seed(5, 3) == (5u ^ 3u));
    Rng c(9);
    double mean = 0.0;
    double second = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const Complex z = c.complex_normal();
        mean += z.real();
        second += std::norm(z);
    }
    CHECK(std::abs(mean / n) < 0.03);
    CHECK(second / n == doctest::Approx(1.0).epsilon(0.05));
    CHECK(all_finite(u));
    CMatrix bad = u;
    bad(0, 0) = Complex(std::nan(""), 0.0);
    CHECK_FALSE(all_finite(bad));
}
