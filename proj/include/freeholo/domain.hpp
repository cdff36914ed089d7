#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "freeholo/freepoly.hpp"
#include "freeholo/matcore.hpp"
#include "freeholo/rng.hpp"

namespace freeholo {

/// An I x J matrix delta of free polynomials over d variables. Its sublevel set
/// {x : ||delta(x)|| < 1} is the domain every realized function lives on.
class PolyMatrix {
public:
    /// entries are row-major, rows*cols of them; each is lifted to nvars variables.
    PolyMatrix(std::size_t rows, std::size_t cols, int nvars, std::vector<FreePoly> entries);

    /// diag(x1, ..., xd): the polydisc-type set max_r ||x^r|| < 1.
    static PolyMatrix diagonal_ball(int d);
    /// [x1 x2 ... xd]: the row-ball x^1 x^1* + ... + x^d x^d* < I.
    static PolyMatrix row_ball(int d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int nvars() const noexcept { return nvars_; }
    const FreePoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    const std::vector<FreePoly>& entries() const noexcept { return entries_; }

    /// delta(0) as an I x J scalar matrix.
    CMatrix constant_part() const;
    /// delta - delta(0).
    PolyMatrix without_constant() const;
    bool vanishes_at_origin() const;
    /// True when every entry is homogeneous of degree one (so ||delta(t x)|| = |t| ||delta(x)||).
    bool is_linear_homogeneous() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    int nvars_;
    std::vector<FreePoly> entries_;
};

/// A point with its cached ||delta(x)||.
struct DomainPoint {
    MatrixTuple x;
    double delta_norm = 0.0;
};

struct Membership {
    bool member = false;
    double norm = 0.0;
};

/// Default strictness margin for evaluation-grade membership.
inline constexpr double kDefaultMargin = 1e-3;

/// The (nI) x (nJ) block matrix whose (i,j) block is delta_ij(x).
CMatrix delta_eval(const PolyMatrix& delta, const MatrixTuple& x);
double delta_norm(const PolyMatrix& delta, const MatrixTuple& x);

/// member iff ||delta(x)|| < 1 and ||delta(x)|| <= 1 - margin. The norm is always reported.
Membership is_member(const PolyMatrix& delta, const MatrixTuple& x, double margin = 0.0);

DomainPoint make_domain_point(const PolyMatrix& delta, MatrixTuple x);

/// Every entry multiplied by t, so the scaled domain is {x : ||delta(x)|| < 1/t}.
PolyMatrix scale_domain(const PolyMatrix& delta, double t);

struct SamplerOptions {
    double shrink = 0.5;
    std::size_t max_rejects = 10000;
    double norm_tol = 1e-7;
    /// Entry (a, b) of each Gaussian part is weighted by exp(-decay (a + b)).
    double decay = 0.0;
};

/// Gaussian direction rescaled by bisection so that ||delta(x)|| = shrink.
/// Falls back to rejection sampling when ||delta(0)|| >= shrink.
MatrixTuple sample_point(const PolyMatrix& delta, std::size_t n, Rng& rng, const SamplerOptions& opts = {});

/// Invertible n x n matrix with condition number at most cond_cap.
CMatrix sample_similarity(std::size_t n, double cond_cap, Rng& rng);

/// The co-isometric inclusion [I_n; 0] of C^n into C^(n+m).
CMatrix inclusion(std::size_t n, std::size_t m);

/// Basis of {T : T x^r = y^r T for all r} from the SVD nullspace of the stacked
/// Sylvester system; singular values below cutoff * sigma_max count as zero.
std::vector<CMatrix> intertwiner_basis(const MatrixTuple& x, const MatrixTuple& y, double cutoff = 1e-10);

/// A random element of the intertwiner space, or nullopt when the space is {0}.
std::optional<CMatrix> sample_intertwiner(const MatrixTuple& x, const MatrixTuple& y, Rng& rng,
                                          double cutoff = 1e-10);

/// max_r ||T x^r - y^r T||.
double intertwining_residual(const CMatrix& t, const MatrixTuple& x, const MatrixTuple& y);

}  // namespace freeholo
