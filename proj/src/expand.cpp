#include "freeholo/expand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace freeholo {

FreePoly SeriesExpansion::partial_sum(std::size_t k) const {
    FreePoly out(components.empty() ? 1 : components.front().nvars());
    for (std::size_t j = 0; j <= k && j < components.size(); ++j) out += components[j];
    return out;
}

RealizedFunction recenter(const RealizedFunction& f) {
    const Colligation& v = f.colligation();
    const std::size_t ell = v.ell();
    const CMatrix delta0 = kron(f.delta().constant_part(), identity(ell));  // (ell I) x (ell J)
    const CMatrix d_delta0 = v.d() * delta0;
    const double q0 = opnorm(d_delta0);
    if (!(q0 < 1.0)) {
        throw DivergenceError("recenter: ||D delta(0)|| = " + std::to_string(q0) + " is not below 1", q0);
    }
    const auto lj = d_delta0.rows();
    const CMatrix m = CMatrix::Identity(lj, lj) - d_delta0;
    const CMatrix d_new = solve(m, v.d()).x;
    const CMatrix c_new = solve(m, v.c()).x;
    const auto li = v.b().cols();
    const CMatrix b_new = v.b() * (CMatrix::Identity(li, li) + delta0 * d_new);
    const Complex alpha_new = v.alpha() + (v.b() * delta0 * c_new)(0, 0);
    return RealizedFunction(Colligation(alpha_new, b_new, c_new, d_new, ell, v.rows(), v.cols()),
                            f.delta().without_constant());
}

namespace {

/// p * q keeping only words of length <= max_len.
void add_truncated_product(FreePoly& acc, const FreePoly& p, const FreePoly& q, Complex scale, std::size_t max_len) {
    Word w;
    for (const auto& [wp, cp] : p.terms()) {
        if (wp.size() > max_len) break;  // graded order: the rest are longer
        for (const auto& [wq, cq] : q.terms()) {
            if (wp.size() + wq.size() > max_len) break;
            w.assign(wp.begin(), wp.end());
            w.insert(w.end(), wq.begin(), wq.end());
            acc.add_term(w, scale * cp * cq);
        }
    }
}

std::size_t total_terms(const std::vector<FreePoly>& v) {
    std::size_t n = 0;
    for (const auto& p : v) n += p.term_count();
    return n;
}

}  // namespace

SeriesExpansion symbolic_expand(const RealizedFunction& f_in, std::size_t degree, const ExpandOptions& opts) {
    SeriesExpansion out;
    out.degree = degree;
    out.recentered = !f_in.delta().vanishes_at_origin();
    const RealizedFunction f = out.recentered ? recenter(f_in) : f_in;

    const Colligation& v = f.colligation();
    const PolyMatrix& delta = f.delta();
    const int d = delta.nvars();
    const std::size_t ell = v.ell();
    const std::size_t rows = v.rows();
    const std::size_t cols = v.cols();

    FreePoly total = FreePoly::constant(v.alpha(), d);
    // u lives in L^J, w in L^I; both indexed block-major (block * ell + s).
    std::vector<FreePoly> u(ell * cols, FreePoly(d));
    for (std::size_t k = 0; k < ell * cols; ++k) u[k] = FreePoly::constant(v.c()(static_cast<Eigen::Index>(k), 0), d);

    for (std::size_t step = 0; step < degree; ++step) {
        std::vector<FreePoly> w(ell * rows, FreePoly(d));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const FreePoly& entry = delta(i, j);
                if (entry.is_zero()) continue;
                for (std::size_t s = 0; s < ell; ++s) {
                    add_truncated_product(w[i * ell + s], entry, u[j * ell + s], 1.0, degree);
                }
            }
        }
        if (total_terms(w) > opts.word_budget) {
            throw BudgetError("symbolic_expand: word budget exceeded at degree " + std::to_string(step + 1),
                              static_cast<int>(step));
        }
        for (std::size_t k = 0; k < w.size(); ++k) {
            const Complex bk = v.b()(0, static_cast<Eigen::Index>(k));
            if (bk != Complex(0.0)) total += bk * w[k];
        }
        std::vector<FreePoly> next(ell * cols, FreePoly(d));
        bool any = false;
        for (std::size_t r = 0; r < next.size(); ++r) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                const Complex dk = v.d()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
                if (dk != Complex(0.0) && !w[k].is_zero()) next[r] += dk * w[k];
            }
            any = any || !next[r].is_zero();
        }
        if (total_terms(next) > opts.word_budget) {
            throw BudgetError("symbolic_expand: word budget exceeded at degree " + std::to_string(step + 1),
                              static_cast<int>(step));
        }
        if (!any) break;
        u = std::move(next);
    }

    out.components.assign(degree + 1, FreePoly(d));
    for (const auto& [w, c] : total.terms()) {
        if (w.size() <= degree) out.components[w.size()].add_term(w, c);
    }
    return out;
}

std::size_t default_dft_nodes(std::size_t degree) {
    std::size_t n = 1;
    while (n < 4 * (degree + 1)) n *= 2;
    return n;
}

DftResult dft_components(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& x, const DftOptions& opts) {
    DftResult out;
    out.nodes = opts.nodes == 0 ? default_dft_nodes(opts.degree) : opts.nodes;
    if (out.nodes <= opts.degree) throw Error("dft_components: need more nodes than the degree");
    const std::size_t nodes = out.nodes;
    auto node = [&](std::size_t j, double r) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes);
        return r * std::polar(1.0, angle);
    };
    auto ring_inside = [&](double r) {
        for (std::size_t j = 0; j < nodes; ++j) {
            if (!is_member(delta, x.scaled(node(j, r)), 0.0).member) return false;
        }
        return true;
    };

    double r = opts.radius;
    int halvings = 0;
    while (!ring_inside(r)) {
        if (++halvings > 60) throw DomainError("dft_components: no admissible radius on the scaling ray", 1.0);
        r *= 0.5;
    }
    out.radius_used = r;

    std::vector<CMatrix> values;
    values.reserve(nodes);
    for (std::size_t j = 0; j < nodes; ++j) values.push_back(f(x.scaled(node(j, r))));

    const auto n = static_cast<Eigen::Index>(x.dim());
    out.components.reserve(opts.degree + 1);
    for (std::size_t k = 0; k <= opts.degree; ++k) {
        CMatrix acc = CMatrix::Zero(n, n);
        // Summed in node order for bit-reproducible output.
        for (std::size_t j = 0; j < nodes; ++j) {
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>((j * k) % nodes) / static_cast<double>(nodes);
            acc += std::polar(1.0, angle) * values[j];
        }
        out.components.push_back(acc * (std::pow(r, -static_cast<double>(k)) / static_cast<double>(nodes)));
    }

    if (opts.outer && opts.outer->radius > r && ring_inside(opts.outer->radius)) {
        const double rho_n = std::pow(r / opts.outer->radius, static_cast<double>(nodes));
        out.certified = true;
        for (std::size_t k = 0; k <= opts.degree; ++k) {
            out.aliasing_bound.push_back(opts.outer->bound * std::pow(opts.outer->radius, -static_cast<double>(k)) *
                                         rho_n / (1.0 - rho_n));
        }
    }
    return out;
}

CauchyReport cauchy_certificate(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& x, double radius,
                                std::size_t samples, std::size_t degree, double tol) {
    if (samples <= degree) throw Error("cauchy_certificate: need more samples than the degree");
    CauchyReport rep;
    rep.radius = radius;
    for (std::size_t j = 0; j < samples; ++j) {
        const Complex lambda =
            radius * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples));
        const MatrixTuple y = x.scaled(lambda);
        const double norm = delta_norm(delta, y);
        // Closed domain: the circle may touch the boundary.
        if (norm > 1.0 + 1e-12) {
            throw DomainError("cauchy_certificate: circle |lambda| = " + std::to_string(radius) +
                                  " exits the domain (||delta|| = " + std::to_string(norm) + ")",
                              norm);
        }
        // A circle touching the boundary is evaluated a hair inside it.
        rep.bound = std::max(rep.bound, opnorm(f(norm < 1.0 ? y : x.scaled(lambda * (1.0 - 1e-12)))));
    }
    DftOptions dopts;
    dopts.degree = degree;
    dopts.nodes = samples;
    dopts.radius = std::min(1.0, radius);
    const DftResult dft = dft_components(f, delta, x, dopts);
    rep.pass = true;
    for (std::size_t k = 0; k <= degree; ++k) {
        rep.component_norms.push_back(opnorm(dft.components[k]));
        rep.component_bounds.push_back(rep.bound * std::pow(radius, -static_cast<double>(k)));
        if (rep.component_norms.back() > rep.component_bounds.back() + tol) rep.pass = false;
    }
    return rep;
}

std::optional<double> admissible_radius(const PolyMatrix& delta, const MatrixTuple& x, bool* exact) {
    constexpr double kCap = 1e3;
    const double nu = delta_norm(delta, x);
    if (!(nu < 1.0)) return std::nullopt;
    if (delta.is_linear_homogeneous()) {
        if (exact) *exact = true;
        // ||delta(lambda x)|| = |lambda| nu, so the open disk of radius 1/nu is inside.
        if (nu == 0.0) return kCap;
        return std::min(kCap, 1.0 / nu);
    }
    if (exact) *exact = false;
    constexpr std::size_t kAngles = 32;
    for (int k = 0; k <= 20; ++k) {
        const double r = 1.0 + std::ldexp(1.0, -k);
        bool ok = true;
        for (double frac : {0.25, 0.5, 0.75, 1.0}) {
            for (std::size_t j = 0; j < kAngles && ok; ++j) {
                const Complex lambda = frac * r *
                                       std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / kAngles);
                ok = is_member(delta, x.scaled(lambda), 0.0).member;
            }
        }
        if (ok) return r;
    }
    return std::nullopt;
}

Approximation approximate_on_finite_set(const RealizedFunction& f, const std::vector<MatrixTuple>& points, double eps,
                                        std::size_t max_degree) {
    if (!(eps > 0.0)) throw Error("approximate_on_finite_set: eps must be positive");
    Approximation out;
    out.certified = f.isometric();
    std::size_t degree = 0;
    double worst_radius = std::numeric_limits<double>::infinity();
    double worst_bound = 0.0;
    const TupleMap map = as_map(f);
    for (const auto& x : points) {
        const Membership m = is_member(f.delta(), x, 0.0);
        if (!m.member) throw DomainError("approximate_on_finite_set: point outside the domain", m.norm);
        bool exact = false;
        const auto r = admissible_radius(f.delta(), x, &exact);
        if (!r) throw DomainError("approximate_on_finite_set: no admissible radius r > 1 at a point", m.norm);
        out.certified = out.certified && exact;
        // delta(x) = 0 with delta linear: F is constant along the whole ray, so degree 0 suffices.
        if (exact && m.norm == 0.0) continue;
        double radius = *r;
        double bound = 1.0;
        if (!(f.isometric() && exact)) {
            // M has to be sampled, so the circle must lie strictly inside.
            if (exact) radius = 0.5 * (1.0 + radius);
            bound = 0.0;
            constexpr std::size_t kSamples = 64;
            for (std::size_t j = 0; j < kSamples; ++j) {
                const Complex lambda =
                    radius * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / kSamples);
                bound = std::max(bound, opnorm(map(x.scaled(lambda))));
            }
        }
        // Tail sum_{k > K} M r^-k = M r^-(K+1) / (1 - 1/r).
        std::size_t k = 0;
        while (k < max_degree && bound * std::pow(radius, -static_cast<double>(k + 1)) / (1.0 - 1.0 / radius) > eps) {
            ++k;
        }
        degree = std::max(degree, k);
        worst_radius = std::min(worst_radius, radius);
        worst_bound = std::max(worst_bound, bound);
    }
    out.degree = degree;
    out.radius = points.empty() ? 0.0 : worst_radius;
    out.bound = worst_bound;
    out.poly = symbolic_expand(f, degree).partial_sum(degree);
    for (const auto& x : points) {
        out.max_error = std::max(out.max_error, opnorm(eval_exact(f, x) - eval(out.poly, x)));
    }
    return out;
}

}  // namespace freeholo
