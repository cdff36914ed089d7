#include "freeholo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace freeholo {

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, int nvars, std::vector<FreePoly> entries)
    : rows_(rows), cols_(cols), nvars_(nvars), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw DimensionError("PolyMatrix: empty shape");
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("PolyMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                             std::to_string(entries_.size()));
    }
    for (const auto& e : entries_) nvars_ = std::max(nvars_, e.nvars());
    for (auto& e : entries_) e = e.with_nvars(nvars_);
}

PolyMatrix PolyMatrix::diagonal_ball(int d) {
    std::vector<FreePoly> entries(static_cast<std::size_t>(d * d), FreePoly(d));
    for (int r = 0; r < d; ++r) entries[static_cast<std::size_t>(r * d + r)] = FreePoly::variable(r + 1, d);
    return PolyMatrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d), d, std::move(entries));
}

PolyMatrix PolyMatrix::row_ball(int d) {
    std::vector<FreePoly> entries;
    for (int r = 1; r <= d; ++r) entries.push_back(FreePoly::variable(r, d));
    return PolyMatrix(1, static_cast<std::size_t>(d), d, std::move(entries));
}

CMatrix PolyMatrix::constant_part() const {
    CMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).constant_term();
    }
    return out;
}

PolyMatrix PolyMatrix::without_constant() const {
    std::vector<FreePoly> out = entries_;
    for (auto& e : out) e.add_term({}, -e.constant_term());
    return PolyMatrix(rows_, cols_, nvars_, std::move(out));
}

bool PolyMatrix::vanishes_at_origin() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const FreePoly& e) { return e.constant_term() == Complex(0.0); });
}

bool PolyMatrix::is_linear_homogeneous() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const FreePoly& e) {
        return e.is_zero() || (e.min_degree() == 1 && e.degree() == 1);
    });
}

CMatrix delta_eval(const PolyMatrix& delta, const MatrixTuple& x) {
    const std::size_t n = x.dim();
    CMatrix out(n * delta.rows(), n * delta.cols());
    EvalCache cache(x);
    for (std::size_t i = 0; i < delta.rows(); ++i) {
        for (std::size_t j = 0; j < delta.cols(); ++j) {
            out.block(i * n, j * n, n, n) = eval_many(delta(i, j), cache);
        }
    }
    return out;
}

double delta_norm(const PolyMatrix& delta, const MatrixTuple& x) { return opnorm(delta_eval(delta, x)); }

Membership is_member(const PolyMatrix& delta, const MatrixTuple& x, double margin) {
    const double norm = delta_norm(delta, x);
    return {norm < 1.0 && norm <= 1.0 - margin, norm};
}

DomainPoint make_domain_point(const PolyMatrix& delta, MatrixTuple x) {
    const double norm = delta_norm(delta, x);
    return {std::move(x), norm};
}

PolyMatrix scale_domain(const PolyMatrix& delta, double t) {
    if (!(t > 0.0)) throw Error("scale_domain: t must be positive");
    std::vector<FreePoly> entries = delta.entries();
    for (auto& e : entries) e *= Complex(t);
    return PolyMatrix(delta.rows(), delta.cols(), delta.nvars(), std::move(entries));
}

namespace {

MatrixTuple gaussian_tuple(std::size_t d, std::size_t n, Rng& rng, double decay) {
    std::vector<CMatrix> parts;
    parts.reserve(d);
    for (std::size_t r = 0; r < d; ++r) {
        CMatrix g = rng.gaussian(n, n);
        if (decay > 0.0) {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) g(a, b) *= std::exp(-decay * static_cast<double>(a + b));
            }
        }
        parts.push_back(std::move(g));
    }
    return MatrixTuple(std::move(parts));
}

}  // namespace

MatrixTuple sample_point(const PolyMatrix& delta, std::size_t n, Rng& rng, const SamplerOptions& opts) {
    if (!(opts.shrink > 0.0 && opts.shrink < 1.0)) throw Error("sample_point: shrink must lie in (0, 1)");
    const std::size_t d = static_cast<std::size_t>(delta.nvars());
    const double origin_norm = opnorm(delta.constant_part());

    if (origin_norm < opts.shrink) {
        for (std::size_t attempt = 0; attempt < opts.max_rejects; ++attempt) {
            const MatrixTuple g = gaussian_tuple(d, n, rng, opts.decay);
            auto f = [&](double t) { return delta_norm(delta, g.scaled(t)); };
            double lo = 0.0;
            double hi = 1.0;
            double f_hi = f(hi);
            int doublings = 0;
            while (f_hi < opts.shrink && doublings < 200) {
                lo = hi;
                hi *= 2.0;
                f_hi = f(hi);
                ++doublings;
            }
            if (f_hi < opts.shrink) continue;  // delta is flat along this ray
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = f(mid);
                if (std::abs(f_mid - opts.shrink) <= opts.norm_tol) return g.scaled(mid);
                (f_mid < opts.shrink ? lo : hi) = mid;
            }
            // Bisection bracket collapsed on a jump; fall back to the inside end.
            if (opts.shrink - f(lo) <= 1e-6) return g.scaled(lo);
        }
        throw SamplingError("sample_point: no ray reached the target norm");
    }

    // Rejection-only mode: the origin itself is not inside the target ball.
    for (std::size_t attempt = 0; attempt < opts.max_rejects; ++attempt) {
        const MatrixTuple g = gaussian_tuple(d, n, rng, opts.decay);
        const double t = std::pow(10.0, rng.uniform(-3.0, 1.0));
        const MatrixTuple x = g.scaled(t);
        const double norm = delta_norm(delta, x);
        if (norm <= opts.shrink && norm < 1.0) return x;
    }
    throw SamplingError("sample_point: rejection sampling exhausted " + std::to_string(opts.max_rejects) +
                        " draws (||delta(0)|| = " + std::to_string(origin_norm) + ")");
}

CMatrix sample_similarity(std::size_t n, double cond_cap, Rng& rng) {
    if (!(cond_cap > 1.0)) throw Error("sample_similarity: cond_cap must exceed 1");
    const CMatrix u = random_unitary(n, rng);
    const CMatrix v = random_unitary(n, rng);
    Eigen::VectorXd sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma(i) = std::pow(cond_cap, rng.uniform());
    return u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
}

CMatrix inclusion(std::size_t n, std::size_t m) {
    CMatrix t = CMatrix::Zero(n + m, n);
    t.topRows(n) = CMatrix::Identity(n, n);
    return t;
}

std::vector<CMatrix> intertwiner_basis(const MatrixTuple& x, const MatrixTuple& y, double cutoff) {
    if (x.size() != y.size()) throw DimensionError("intertwiner_basis: tuples differ in d");
    const auto n = static_cast<Eigen::Index>(x.dim());
    const auto m = static_cast<Eigen::Index>(y.dim());
    const Eigen::Index unknowns = m * n;
    // Column-major vec: vec(T x) = (x^T (x) I_m) vec T, vec(y T) = (I_n (x) y) vec T.
    CMatrix system(static_cast<Eigen::Index>(x.size()) * unknowns, unknowns);
    const CMatrix eye_m = CMatrix::Identity(m, m);
    const CMatrix eye_n = CMatrix::Identity(n, n);
    for (std::size_t r = 0; r < x.size(); ++r) {
        system.middleRows(static_cast<Eigen::Index>(r) * unknowns, unknowns) =
            kron(x[r].transpose(), eye_m) - kron(eye_n, y[r]);
    }
    Eigen::BDCSVD<CMatrix> svd(system, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = sv.size() > 0 && sv(0) > 0.0 ? sv(0) : 1.0;
    std::vector<CMatrix> basis;
    for (Eigen::Index k = 0; k < unknowns; ++k) {
        const double s = k < sv.size() ? sv(k) : 0.0;
        if (s <= cutoff * scale) {
            const Eigen::VectorXcd v = svd.matrixV().col(k);
            basis.push_back(Eigen::Map<const CMatrix>(v.data(), m, n));
        }
    }
    return basis;
}

std::optional<CMatrix> sample_intertwiner(const MatrixTuple& x, const MatrixTuple& y, Rng& rng, double cutoff) {
    const auto basis = intertwiner_basis(x, y, cutoff);
    if (basis.empty()) return std::nullopt;
    CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(y.dim()), static_cast<Eigen::Index>(x.dim()));
    for (const auto& b : basis) t += rng.complex_normal() * b;
    return t;
}

double intertwining_residual(const CMatrix& t, const MatrixTuple& x, const MatrixTuple& y) {
    double worst = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) worst = std::max(worst, opnorm(t * x[r] - y[r] * t));
    return worst;
}

}  // namespace freeholo
