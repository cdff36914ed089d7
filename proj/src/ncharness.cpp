#include "freeholo/ncharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <sstream>
#include <thread>

#include "freeholo/expand.hpp"

namespace freeholo {

Evaluator realized_evaluator(const RealizedFunction& f, std::string name) {
    return Evaluator{std::move(name), as_map(f), f.delta(), true, f.isometric()};
}

Evaluator polynomial_evaluator(const FreePoly& p, const PolyMatrix& delta, std::string name) {
    return Evaluator{std::move(name), [p](const MatrixTuple& x) { return eval(p, x); }, delta, true, false};
}

Evaluator transpose_evaluator(const PolyMatrix& delta) {
    return Evaluator{"transpose", [](const MatrixTuple& x) -> CMatrix { return x[0].transpose(); }, delta, false,
                     false};
}

Evaluator constant_evaluator(Complex c, const PolyMatrix& delta) {
    return Evaluator{"constant", [c](const MatrixTuple& x) -> CMatrix { return c * identity(x.dim()); }, delta, true,
                     std::abs(c) <= 1.0};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::skipped: return "skipped";
    }
    return "fail";
}

std::string digest(const MatrixTuple& x) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    const std::uint64_t dims[2] = {x.size(), x.dim()};
    mix(dims, sizeof(dims));
    for (const auto& p : x.parts()) mix(p.data(), sizeof(Complex) * static_cast<std::size_t>(p.size()));
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

PropertyReport run_trials(const std::string& suite, std::size_t trials, std::uint64_t seed, double tol,
                          std::size_t threads, const std::function<TrialOutcome(std::uint64_t)>& trial) {
    std::vector<TrialOutcome> outcomes(trials);
    std::vector<std::exception_ptr> errors(trials);
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t t = begin; t < trials; t += step) {
            try {
                outcomes[t] = trial(trial_seed(seed, t));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, trials));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    PropertyReport rep;
    rep.suite = suite;
    rep.trials = trials;
    rep.tolerance = tol;
    for (std::size_t t = 0; t < trials; ++t) {
        const double r = outcomes[t].residual;
        rep.max_residual = std::max(rep.max_residual, std::isnan(r) ? INFINITY : r);
        if (!(r <= tol)) rep.failures.push_back({trial_seed(seed, t), outcomes[t].digest, r});
    }
    rep.verdict = rep.failures.empty() ? Verdict::pass : Verdict::fail;
    return rep;
}

namespace {

std::size_t pick_size(const HarnessOptions& opts, Rng& rng) {
    if (opts.sizes.empty()) throw Error("harness: no sample sizes configured");
    return opts.sizes[rng.index(0, opts.sizes.size() - 1)];
}

SamplerOptions sampler(const HarnessOptions& opts) {
    SamplerOptions s;
    s.shrink = opts.shrink;
    return s;
}

/// s^-1 x s for every part.
MatrixTuple inverse_conjugate(const MatrixTuple& x, const CMatrix& s) {
    std::vector<CMatrix> parts;
    parts.reserve(x.size());
    for (const auto& p : x.parts()) parts.push_back(solve(s, p * s).x);
    return MatrixTuple(std::move(parts));
}

/// A similarity s with cond(s) <= cap such that s x s^-1 stays in the domain; the
/// cap is relaxed towards 1 on retries and a unitary is the last resort.
CMatrix similarity_into_domain(const PolyMatrix& delta, const MatrixTuple& x, const HarnessOptions& opts, Rng& rng,
                               bool inverse) {
    double cap = opts.cond_cap;
    for (std::size_t attempt = 0; attempt < opts.max_retries; ++attempt) {
        const CMatrix s = sample_similarity(x.dim(), cap, rng);
        const MatrixTuple y = inverse ? inverse_conjugate(x, s) : x.conjugated(s);
        if (is_member(delta, y, 0.0).member) return s;
        cap = std::max(1.0 + 1e-9, std::sqrt(cap));
    }
    return random_unitary(x.dim(), rng);
}

}  // namespace

TrialOutcome intertwining_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts) {
    Rng rng(seed);
    const std::size_t n = pick_size(opts, rng);
    const MatrixTuple x = sample_point(f.delta, n, rng, sampler(opts));
    const auto mode = rng.index(0, 2);
    CMatrix t;
    MatrixTuple y;
    if (mode == 1) {
        const std::size_t m = pick_size(opts, rng);
        const MatrixTuple z = sample_point(f.delta, m, rng, sampler(opts));
        const MatrixTuple pair[2] = {x, z};
        y = direct_sum(pair);
        t = inclusion(n, m);
    } else {
        const CMatrix s = similarity_into_domain(f.delta, x, opts, rng, false);
        y = x.conjugated(s);
        t = s;
        if (mode == 2) {
            if (auto solved = sample_intertwiner(x, y, rng)) t = *solved;
        }
    }
    const CMatrix fx = f(x);
    const CMatrix fy = f(y);
    TrialOutcome out;
    out.digest = digest(x);
    out.residual = opnorm(t * fx - fy * t) / ((1.0 + opnorm(t)) * (1.0 + opnorm(fx)));
    return out;
}

PropertyReport check_intertwining(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                  const HarnessOptions& opts) {
    auto rep = run_trials("intertwining", trials, seed, opts.tol, opts.threads,
                          [&](std::uint64_t s) { return intertwining_trial(f, s, opts); });
    rep.note = f.name;
    return rep;
}

TrialOutcome direct_sum_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts) {
    Rng rng(seed);
    const std::size_t m = 1 + rng.index(0, 3);
    std::vector<MatrixTuple> pieces;
    for (std::size_t k = 0; k < m; ++k) pieces.push_back(sample_point(f.delta, pick_size(opts, rng), rng, sampler(opts)));
    const MatrixTuple sum = direct_sum(pieces);
    const bool unitary = rng.index(0, 1) == 0;
    const CMatrix s = unitary ? random_unitary(sum.dim(), rng)
                              : similarity_into_domain(f.delta, sum, opts, rng, true);
    const MatrixTuple conj = inverse_conjugate(sum, s);

    std::vector<CMatrix> values;
    values.reserve(m);
    for (const auto& p : pieces) values.push_back(f(p));
    const CMatrix blocks = blkdiag(values);
    const CMatrix expected = solve(s, blocks * s).x;
    TrialOutcome out;
    out.digest = digest(sum);
    out.residual = opnorm(f(conj) - expected);
    return out;
}

PropertyReport check_direct_sums(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                 const HarnessOptions& opts) {
    auto rep = run_trials("direct_sums", trials, seed, opts.tol, opts.threads,
                          [&](std::uint64_t s) { return direct_sum_trial(f, s, opts); });
    rep.note = f.name;
    return rep;
}

PropertyReport check_ssoc(const Evaluator& f, const MatrixTuple& x, const CMatrix& vectors,
                          const std::vector<std::size_t>& dims, double tol) {
    const std::size_t n = x.dim();
    if (vectors.rows() != static_cast<Eigen::Index>(n)) throw DimensionError("check_ssoc: vectors must have n rows");
    if (!std::is_sorted(dims.begin(), dims.end())) throw Error("check_ssoc: dims must be ascending");
    PropertyReport rep;
    rep.suite = "ssoc";
    rep.trials = dims.size();
    rep.tolerance = tol;
    const CMatrix fx_v = f(x) * vectors;
    double previous = INFINITY;
    bool monotone = true;
    for (std::size_t k : dims) {
        if (k > n) throw DimensionError("check_ssoc: compression dimension exceeds n");
        const CMatrix p = corner_projection(n, k);
        const MatrixTuple xk = x.compressed(p);
        const Membership m = is_member(f.delta, xk, 0.0);
        if (!m.member) {
            throw DomainError("check_ssoc: compression to dimension " + std::to_string(k) + " leaves the domain",
                              m.norm);
        }
        double err = 0.0;
        const CMatrix diff = f(xk) * vectors - fx_v;
        for (Eigen::Index c = 0; c < diff.cols(); ++c) err = std::max(err, diff.col(c).norm());
        rep.profile.push_back(err);
        rep.max_residual = std::max(rep.max_residual, err);
        if (err > previous + 10.0 * tol) {
            monotone = false;
            rep.failures.push_back({k, "dim", err});
        }
        previous = err;
    }
    const bool settled = !rep.profile.empty() && rep.profile.back() <= tol;
    if (!settled && !rep.profile.empty()) rep.failures.push_back({dims.back(), "final", rep.profile.back()});
    rep.verdict = settled && monotone ? Verdict::pass : Verdict::fail;
    rep.note = "decay evidence only; finite compressions cannot prove strong continuity";
    return rep;
}

TrialOutcome projection_trial(const Evaluator& f, std::uint64_t seed, const HarnessOptions& opts) {
    Rng rng(seed);
    const std::size_t n = std::max<std::size_t>(2, pick_size(opts, rng));
    const std::size_t k = rng.index(1, n);
    const std::size_t d = static_cast<std::size_t>(f.delta.nvars());
    TrialOutcome out;

    const CMatrix f0 = f(MatrixTuple::zeros(d, n));
    const double mass = off_scalar_mass(f0);
    if (mass > opts.tol) {
        out.residual = mass;  // F(0) must be scalar
        out.digest = "origin";
        return out;
    }
    const Complex alpha = f0.trace() / static_cast<double>(n);

    const MatrixTuple corner = sample_point(f.delta, k, rng, sampler(opts));
    std::vector<CMatrix> parts;
    for (const auto& c : corner.parts()) {
        CMatrix padded = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        padded.topLeftCorner(c.rows(), c.cols()) = c;
        parts.push_back(std::move(padded));
    }
    const MatrixTuple a(std::move(parts));
    out.digest = digest(a);

    const CMatrix p = corner_projection(n, k);
    const CMatrix perp = identity(n) - p;
    const CMatrix fa = f(a);
    double residual = opnorm(fa - p * fa * p - perp * f0 * perp) / (1.0 + opnorm(fa));
    if (std::abs(alpha) < 1.0 && opnorm(fa) < 1.0) {
        const CMatrix ha = mobius_apply(alpha, fa);
        residual = std::max(residual, opnorm(ha - p * ha * p) / (1.0 + opnorm(ha)));
    }
    out.residual = residual;
    return out;
}

PropertyReport check_projection_lemma(const Evaluator& f, std::size_t trials, std::uint64_t seed,
                                      const HarnessOptions& opts) {
    const std::size_t d = static_cast<std::size_t>(f.delta.nvars());
    const Membership origin = is_member(f.delta, MatrixTuple::zeros(d, 1), 0.0);
    if (!origin.member) {
        PropertyReport rep;
        rep.suite = "projection_lemma";
        rep.tolerance = opts.tol;
        rep.verdict = Verdict::skipped;
        rep.note = "0 is not in the domain";
        return rep;
    }
    auto rep = run_trials("projection_lemma", trials, seed, opts.tol, opts.threads,
                          [&](std::uint64_t s) { return projection_trial(f, s, opts); });
    rep.note = f.name;
    return rep;
}

namespace {

void enumerate_words(std::size_t d, std::size_t max_len, std::vector<Word>& out) {
    out.push_back({});
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            if (out[i].size() != len - 1) continue;
            for (std::size_t letter = 1; letter <= d; ++letter) {
                Word w = out[i];
                w.push_back(static_cast<int>(letter));
                out.push_back(std::move(w));
            }
        }
        begin = end;
    }
}

}  // namespace

PropertyReport check_algebra_membership(const Evaluator& f, const MatrixTuple& x,
                                        const std::vector<std::size_t>& degrees, double tol) {
    constexpr std::size_t kMaxColumns = 20000;
    PropertyReport rep;
    rep.suite = "algebra_membership";
    rep.trials = degrees.size();
    rep.tolerance = tol;
    const auto n = static_cast<Eigen::Index>(x.dim());
    const CMatrix fx = f(x);
    const Eigen::Map<const Eigen::VectorXcd> target(fx.data(), n * n);
    const double scale = 1.0 + fx.norm();
    EvalCache cache(x);
    std::ostringstream ranks;
    bool reached = false;
    for (std::size_t m : degrees) {
        std::vector<Word> words;
        enumerate_words(x.size(), m, words);
        if (words.size() > kMaxColumns) {
            rep.note = "stopped at degree " + std::to_string(m) + ": too many words";
            break;
        }
        CMatrix basis(n * n, static_cast<Eigen::Index>(words.size()));
        for (std::size_t c = 0; c < words.size(); ++c) {
            const CMatrix& w = cache.word(words[c]);
            basis.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXcd>(w.data(), n * n);
        }
        Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(basis);
        cod.setThreshold(1e-12);
        const Eigen::VectorXcd coef = cod.solve(target);
        const double dist = (basis * coef - target).norm() / scale;
        rep.profile.push_back(dist);
        rep.max_residual = std::max(rep.max_residual, dist);
        ranks << (ranks.tellp() > 0 ? " " : "") << "m=" << m << ":rank=" << cod.rank();
        if (dist <= tol) reached = true;
    }
    rep.verdict = reached ? Verdict::pass : Verdict::fail;
    if (!reached) rep.failures.push_back({0, "distance", rep.profile.empty() ? INFINITY : rep.profile.back()});
    rep.note = (rep.note.empty() ? "" : rep.note + "; ") + ranks.str();
    return rep;
}

TrialOutcome series_trial(const RealizedFunction& f, std::uint64_t seed, const HarnessOptions& opts) {
    Rng rng(seed);
    const std::size_t n = pick_size(opts, rng);
    SamplerOptions s = sampler(opts);
    // Cauchy truncation degrees grow like log(eps) / log ||delta(x)||.
    s.shrink = std::min(s.shrink, 0.3);
    const MatrixTuple x = sample_point(f.delta(), n, rng, s);
    TrialOutcome out;
    out.digest = digest(x);

    const CMatrix exact = eval_exact(f, x);
    const Approximation approx = approximate_on_finite_set(f, {x}, opts.series_eps);
    double worst = std::max(0.0, opnorm(exact - eval(approx.poly, x)) - opts.series_eps);

    // Geometric envelope of the partial sums.
    const SeriesExpansion series = symbolic_expand(f, approx.degree);
    const double r = approx.radius;
    FreePoly partial(f.delta().nvars());
    for (std::size_t k = 0; k <= approx.degree; ++k) {
        partial += series.components[k];
        const double envelope = approx.bound * std::pow(r, -static_cast<double>(k + 1)) / (1.0 - 1.0 / r);
        worst = std::max(worst, opnorm(exact - eval(partial, x)) - envelope - 1e-10);
    }

    const NeumannReport neumann = eval_neumann_auto(f, x);
    worst = std::max(worst, opnorm(exact - neumann.value) - neumann.tail_bound - 1e-12);

    const CMatrix u = random_unitary(f.colligation().ell(), rng);
    const RealizedFunction rotated(f.colligation().rotated(u), f.delta());
    worst = std::max(worst, opnorm(exact - eval_exact(rotated, x)));
    out.residual = worst;
    return out;
}

PropertyReport check_series_equivalence(const RealizedFunction& f, std::size_t trials, std::uint64_t seed,
                                        bool balanced_certified, const HarnessOptions& opts) {
    if (!balanced_certified) {
        PropertyReport rep;
        rep.suite = "series_equivalence";
        rep.tolerance = opts.tol;
        rep.verdict = Verdict::skipped;
        rep.note = "domain not certified balanced; series leg not run";
        return rep;
    }
    return run_trials("series_equivalence", trials, seed, opts.tol, opts.threads,
                      [&](std::uint64_t s) { return series_trial(f, s, opts); });
}

}  // namespace freeholo
