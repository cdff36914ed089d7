#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "freeholo/freepoly.hpp"
#include "freeholo/realization.hpp"

namespace freeholo {

/// Cauchy growth certificate ||P_k(x)|| <= M / r^k.
struct GrowthCertificate {
    double bound = 1.0;   ///< M
    double radius = 1.0;  ///< r
};

/// Homogeneous components P_0..P_K of a free power series.
struct SeriesExpansion {
    std::vector<FreePoly> components;
    std::size_t degree = 0;  ///< K
    std::optional<GrowthCertificate> growth;
    /// The colligation was re-centered to make delta vanish at 0; it is no longer isometric.
    bool recentered = false;

    /// P_0 + ... + P_k (k clamped to K).
    FreePoly partial_sum(std::size_t k) const;
};

struct ExpandOptions {
    std::size_t word_budget = 1'000'000;
};

/// Re-centered colligation for delta - delta(0): with Delta0 = delta(0) (x) I_ell and
/// M = I - D Delta0, D' = M^-1 D, C' = M^-1 C, B' = B (I + Delta0 D'), alpha' = alpha + B Delta0 C'.
/// Requires ||D Delta0|| < 1. The result pairs with delta.without_constant().
RealizedFunction recenter(const RealizedFunction& f);

/// Collects the degree <= K words of alpha + sum_m B delta (D delta)^m C.
SeriesExpansion symbolic_expand(const RealizedFunction& f, std::size_t degree, const ExpandOptions& opts = {});

struct DftOptions {
    std::size_t degree = 8;   ///< K
    std::size_t nodes = 0;    ///< N; 0 selects 4 (K + 1) rounded up to a power of two
    double radius = 1.0;      ///< r, auto-shrunk by halves until every node is a member
    /// Outer ring (r', M') with ||F|| <= M' on it; enables the aliasing bound.
    std::optional<GrowthCertificate> outer;
};

struct DftResult {
    std::vector<CMatrix> components;  ///< A_0..A_K
    double radius_used = 1.0;
    std::size_t nodes = 0;
    bool certified = false;
    std::vector<double> aliasing_bound;  ///< per k, when certified
};

std::size_t default_dft_nodes(std::size_t degree);

/// A_k = r^-k (1/N) sum_j F(r w^j x) w^-jk with w = exp(2 pi i / N).
DftResult dft_components(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& x, const DftOptions& opts);

struct CauchyReport {
    double bound = 0.0;   ///< M = max sampled ||F(lambda x)|| on |lambda| = r
    double radius = 0.0;  ///< r
    std::vector<double> component_norms;
    std::vector<double> component_bounds;  ///< M / r^k
    bool pass = false;
};

/// Samples the circle |lambda| = r (which must stay in the closed domain), then
/// checks ||A_k|| <= M / r^k + tol for DFT components k <= degree.
CauchyReport cauchy_certificate(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& x, double radius,
                                std::size_t samples, std::size_t degree, double tol = 1e-8);

struct Approximation {
    FreePoly poly;
    std::size_t degree = 0;
    double max_error = 0.0;
    double radius = 0.0;  ///< smallest certified radius over the point set
    double bound = 0.0;   ///< M used in the truncation estimate
    /// False when the radius or M came from sampling rather than a proof
    /// (non-linear delta or non-isometric colligation).
    bool certified = false;
};

/// A truncation sum_{k<=K} P_k with K chosen from the worst Cauchy estimate so that
/// max over points of ||F(x) - p(x)|| <= eps; the measured maximum is reported.
Approximation approximate_on_finite_set(const RealizedFunction& f, const std::vector<MatrixTuple>& points,
                                        double eps, std::size_t max_degree = 200);

/// A radius r > 1 (capped at 1e3) with lambda x inside the domain for |lambda| < r.
/// For linear homogeneous delta this is exactly 1 / ||delta(x)|| and *exact is set;
/// otherwise r comes from sampled disks. nullopt when no r > 1 is found.
std::optional<double> admissible_radius(const PolyMatrix& delta, const MatrixTuple& x, bool* exact = nullptr);

}  // namespace freeholo
