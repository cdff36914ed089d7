#include <doctest.h>

#include <stdexcept>

#include "freeholo/json_io.hpp"
#include "freeholo/ncharness.hpp"
#include "freeholo/polyparse.hpp"

using namespace freeholo;

namespace {

RealizedFunction diag_ball_function(std::uint64_t seed) {
    Rng rng(seed);
    return RealizedFunction(random_colligation(2, 2, 2, rng), PolyMatrix::diagonal_ball(2));
}

}  // namespace

TEST_CASE("intertwining") {
    const RealizedFunction f = diag_ball_function(1);
    const PropertyReport r = check_intertwining(realized_evaluator(f), 60, 11);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.trials == 60);
    CHECK(r.max_residual <= 1e-8);

    const PolyMatrix diag = PolyMatrix::diagonal_ball(2);
    const Evaluator p = polynomial_evaluator(parse_poly("1 + x1 x2 - 2 x2^2 x1", 2), diag);
    CHECK(check_intertwining(p, 60, 12).verdict == Verdict::pass);

    const PropertyReport bad = check_intertwining(transpose_evaluator(diag), 60, 13);
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.max_residual >= 0.1);
    CHECK_FALSE(bad.failures.empty());
    CHECK_FALSE(bad.failures.front().digest.empty());
}

TEST_CASE("the transpose counterexample by hand") {
    // x = E12, s = diag(1, 2): s x s^-1 = 2 E12, but (2 E12)^T s != s E12^T.
    const CMatrix s = Eigen::Vector2cd(1.0, 2.0).asDiagonal();
    const MatrixTuple x({unit(2, 1, 2)});
    const MatrixTuple y = x.conjugated(s);
    const Evaluator t = transpose_evaluator(PolyMatrix::diagonal_ball(1));
    CHECK(opnorm(s * t(x) - t(y) * s) >= 1.0);
    CHECK(opnorm(identity(2) * t(x) - t(x) * identity(2)) == 0.0);
}

TEST_CASE("direct sums") {
    const RealizedFunction f = diag_ball_function(2);
    CHECK(check_direct_sums(realized_evaluator(f), 60, 21).verdict == Verdict::pass);
    const PolyMatrix row = PolyMatrix::row_ball(2);
    const Evaluator p = polynomial_evaluator(parse_poly("x1 x2 x1 - 3i x2", 2), row);
    const PropertyReport r = check_direct_sums(p, 60, 22);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.max_residual <= 1e-10);
    CHECK(check_direct_sums(constant_evaluator(0.5, row), 10, 23).max_residual <= 1e-13);
}

TEST_CASE("sequential strong continuity evidence") {
    const PolyMatrix diag = PolyMatrix::diagonal_ball(2);
    Rng rng(3);
    // x supported on the leading 3x3 corner of C^8.
    CMatrix a = CMatrix::Zero(8, 8);
    CMatrix b = CMatrix::Zero(8, 8);
    a.topLeftCorner(3, 3) = rng.gaussian(3, 3) * 0.2;
    b.topLeftCorner(3, 3) = rng.gaussian(3, 3) * 0.2;
    const MatrixTuple x({a, b});
    const CMatrix v = CMatrix::Identity(8, 2);
    const Evaluator p = polynomial_evaluator(parse_poly("x1 x2 + x2^2 - 1", 2), diag);
    const PropertyReport r = check_ssoc(p, x, v, {3, 4, 6, 8}, 1e-12);
    CHECK(r.verdict == Verdict::pass);
    for (double e : r.profile) CHECK(e == 0.0);

    const PropertyReport c = check_ssoc(constant_evaluator(0.2, diag), x, v, {1, 2, 8}, 1e-12);
    for (double e : c.profile) CHECK(e == 0.0);

    SamplerOptions so;
    so.decay = 0.5;
    const MatrixTuple y = sample_point(diag, 32, rng, so);
    const PropertyReport g =
        check_ssoc(realized_evaluator(diag_ball_function(4)), y, CMatrix::Identity(32, 2), {4, 8, 16, 24, 32}, 1e-6);
    CHECK(g.verdict == Verdict::pass);
    CHECK(g.profile.back() <= 1e-6);
}

TEST_CASE("projection lemma") {
    const RealizedFunction f = diag_ball_function(5);
    const PropertyReport r = check_projection_lemma(realized_evaluator(f), 40, 51);
    CHECK(r.verdict == Verdict::pass);
    const PolyMatrix comm(1, 1, 2, {parse_poly("1 - (x1x2 - x2x1)", 2)});
    const Evaluator p = polynomial_evaluator(parse_poly("x1", 2), comm);
    CHECK(check_projection_lemma(p, 5, 52).verdict == Verdict::skipped);
    // A non-scalar F(0) fails outright.
    const Evaluator bent{"bent", [](const MatrixTuple& x) { return CMatrix(unit(x.dim(), 1, 1)); },
                         PolyMatrix::diagonal_ball(2), true, false};
    const PropertyReport b = check_projection_lemma(bent, 5, 53);
    CHECK(b.verdict == Verdict::fail);
    CHECK(b.max_residual >= 0.5);
}

TEST_CASE("algebra membership") {
    const PolyMatrix diag = PolyMatrix::diagonal_ball(2);
    Rng rng(6);
    const MatrixTuple x = sample_point(diag, 4, rng, {0.5});
    const Evaluator cubic = polynomial_evaluator(parse_poly("2 + x1 x2 x1 - x2", 2), diag);
    const PropertyReport r = check_algebra_membership(cubic, x, {0, 1, 2, 3}, 1e-10);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.profile[3] <= 1e-10);

    const MatrixTuple s({CMatrix::Constant(1, 1, Complex(0.3, 0.1)), CMatrix::Constant(1, 1, Complex(-0.2))});
    const PropertyReport sc = check_algebra_membership(realized_evaluator(diag_ball_function(7)), s, {0, 1}, 1e-12);
    CHECK(std::min(sc.profile[0], sc.profile[1]) <= 1e-12);

    const MatrixTuple y = sample_point(diag, 3, rng, {0.4});
    const PropertyReport rf = check_algebra_membership(realized_evaluator(diag_ball_function(8)), y, {0, 1, 2, 3, 4}, 1e-8);
    CHECK(rf.verdict == Verdict::pass);
    CHECK(rf.profile[1] <= rf.profile[0]);
    CHECK_FALSE(rf.note.empty());
}

TEST_CASE("series equivalence") {
    const RealizedFunction f = diag_ball_function(9);
    const PropertyReport r = check_series_equivalence(f, 10, 91, true);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.max_residual <= 1e-8);
    CHECK(check_series_equivalence(f, 10, 91, false).verdict == Verdict::skipped);
}

TEST_CASE("determinism and threading") {
    const Evaluator f = realized_evaluator(diag_ball_function(10));
    HarnessOptions one;
    HarnessOptions four;
    four.threads = 4;
    const PropertyReport a = check_intertwining(f, 30, 77, one);
    const PropertyReport b = check_intertwining(f, 30, 77, one);
    const PropertyReport c = check_intertwining(f, 30, 77, four);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    CHECK(report_to_json(a).dump() == report_to_json(c).dump());

    const PropertyReport d = run_trials("demo", 5, 3, 1.0, 2, [](std::uint64_t s) {
        return TrialOutcome{static_cast<double>(s), std::to_string(s)};
    });
    REQUIRE(d.failures.size() == 3);
    CHECK(d.failures[0].seed == 3u);
    CHECK(d.max_residual == 7.0);
    CHECK_THROWS(run_trials("boom", 4, 0, 1.0, 2, [](std::uint64_t s) -> TrialOutcome {
        if (s == 2) throw std::runtime_error("boom");
        return {};
    }));
}
