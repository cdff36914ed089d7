#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "freeholo/domain.hpp"
#include "freeholo/freepoly.hpp"
#include "freeholo/realization.hpp"

namespace freeholo {

/// A graded map together with the domain it declares. The harness never infers
/// domains; every sample is drawn from `delta`.
struct Evaluator {
    std::string name;
    TupleMap fn;
    PolyMatrix delta;
    bool claims_ip = true;
    bool claims_schur = false;

    CMatrix operator()(const MatrixTuple& x) const { return fn(x); }
};

Evaluator realized_evaluator(const RealizedFunction& f, std::string name = "realized");
Evaluator polynomial_evaluator(const FreePoly& p, const PolyMatrix& delta, std::string name = "polynomial");
/// x -> (x^1)^T: graded but not intertwining preserving.
Evaluator transpose_evaluator(const PolyMatrix& delta);
Evaluator constant_evaluator(Complex c, const PolyMatrix& delta);

enum class Verdict { pass, fail, skipped };

struct TrialFailure {
    std::uint64_t seed = 0;
    std::string digest;
    double residual = 0.0;
};

struct PropertyReport {
    std::string suite;
    std::size_t trials = 0;
    std::vector<TrialFailure> failures;
    double max_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::pass;
    /// Per-dimension or per-degree curve (SSOC decay, algebra distances).
    std::vector<double> profile;
    std::string note;

    bool passed() const noexcept { return verdict != Verdict::fail; }
};

std::string to_string(Verdict v);

struct HarnessOptions {
    std::vector<std::size_t> sizes{2, 3, 4};
    double shrink = 0.5;
    double cond_cap = 50.0;
    double tol = 1e-8;
    std::size_t threads = 1;
    std::size_t max_retries = 50;
    /// Truncation target for the series leg of check_series_equivalence.
    double series_eps = 1e-6;
};

/// Outcome of one randomized trial; fully determined by (evaluator, seed, options).
struct TrialOutcome {
    double residual = 0.0;
    std::string digest;
};

/// FNV-1a digest of the tuple entries, hex encoded.
std::string digest(const MatrixTuple& x);

TrialOutcome intertwining_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts);
TrialOutcome direct_sum_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts);
TrialOutcome projection_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts);
TrialOutcome series_trial(const RealizedFunction& f, std::uint64_t seed, const HarnessOptions& opts);

/// T F(x) = F(y) T for pairs built by similarity, direct-summand inclusion, or the
/// Sylvester nullspace solver. Residual ||T F(x) - F(y) T|| / ((1 + ||T||)(1 + ||F(x)||)).
PropertyReport check_intertwining(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                  const HarnessOptions& opts = {});

/// F(s^-1 (x_1 (+) ... (+) x_m) s) = s^-1 (F(x_1) (+) ... (+) F(x_m)) s, m <= 4.
PropertyReport check_direct_sums(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                 const HarnessOptions& opts = {});

/// ||[F(P_k x P_k) - F(x)] v|| for each k in dims; pass iff the last value is <= tol
/// and the sequence never rises by more than 10 tol. Vectors are the columns of `vectors`.
PropertyReport check_ssoc(const Evaluator& f, const MatrixTuple& x, const CMatrix& vectors,
                          const std::vector<std::size_t>& dims, double tol);

/// a = P a P  =>  F(a) = P F(a) P + P^perp F(0) P^perp, and with alpha read off F(0),
/// H = phi_alpha o F satisfies H(a) = P H(a) P.
PropertyReport check_projection_lemma(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                      const HarnessOptions& opts = {});

/// Relative Frobenius distance from F(x) to span{x^w : |w| <= m} for each m.
/// Pass iff some distance is <= tol. The note records the rank per degree.
PropertyReport check_algebra_membership(const Evaluator& f, const MatrixTuple& x,
                                        const std::vector<std::size_t>& degrees, double tol);

/// Exact evaluation vs. certified partial sums vs. finite-set approximation vs. a
/// Lambda-rotated copy of the colligation. Requires a balanced-certified domain.
PropertyReport check_series_equivalence(const RealizedFunction& f, std::size_t trials, std::uint64_t seed,
                                        bool balanced_certified, const HarnessOptions& opts = {});

/// Runs trial(seed ^ t) for t < trials on up to `threads` workers and assembles
/// the report in trial order.
PropertyReport run_trials(const std::string& suite, std::size_t trials, std::uint64_t seed, double tol,
                          std::size_t threads, const std::function<TrialOutcome(std::uint64_t)>& trial);

}  // namespace freeholo
