#include "freeholo/realization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace freeholo {

Colligation::Colligation(Complex alpha, CMatrix b, CMatrix c, CMatrix d, std::size_t ell, std::size_t rows,
                         std::size_t cols)
    : alpha_(alpha), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), ell_(ell), rows_(rows), cols_(cols) {
    if (ell_ == 0 || rows_ == 0 || cols_ == 0) throw DimensionError("Colligation: ell, I and J must be positive");
    const auto li = static_cast<Eigen::Index>(ell_ * rows_);
    const auto lj = static_cast<Eigen::Index>(ell_ * cols_);
    if (b_.rows() != 1 || b_.cols() != li) throw DimensionError("Colligation: B must be 1 x (ell I)");
    if (c_.rows() != lj || c_.cols() != 1) throw DimensionError("Colligation: C must be (ell J) x 1");
    if (d_.rows() != lj || d_.cols() != li) throw DimensionError("Colligation: D must be (ell J) x (ell I)");
    if (!std::isfinite(alpha_.real()) || !std::isfinite(alpha_.imag()) || !all_finite(b_) || !all_finite(c_) ||
        !all_finite(d_)) {
        throw Error("Colligation: non-finite entries");
    }
}

Colligation Colligation::from_block(const CMatrix& v, std::size_t ell, std::size_t rows, std::size_t cols) {
    const auto li = static_cast<Eigen::Index>(ell * rows);
    const auto lj = static_cast<Eigen::Index>(ell * cols);
    if (v.rows() != 1 + lj || v.cols() != 1 + li) {
        throw DimensionError("Colligation::from_block: expected a (1 + ell J) x (1 + ell I) matrix");
    }
    return Colligation(v(0, 0), v.block(0, 1, 1, li), v.block(1, 0, lj, 1), v.block(1, 1, lj, li), ell, rows,
                       cols);
}

CMatrix Colligation::block() const {
    const auto li = b_.cols();
    const auto lj = c_.rows();
    CMatrix v(1 + lj, 1 + li);
    v(0, 0) = alpha_;
    v.block(0, 1, 1, li) = b_;
    v.block(1, 0, lj, 1) = c_;
    v.block(1, 1, lj, li) = d_;
    return v;
}

double Colligation::isometry_defect() const {
    const CMatrix v = block();
    return opnorm(v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols()));
}

Colligation Colligation::rotated(const CMatrix& u) const {
    if (u.rows() != static_cast<Eigen::Index>(ell_) || u.cols() != static_cast<Eigen::Index>(ell_)) {
        throw DimensionError("Colligation::rotated: u must be ell x ell");
    }
    const CMatrix ui = kron(identity(rows_), u);
    const CMatrix uj = kron(identity(cols_), u);
    return Colligation(alpha_, b_ * ui.adjoint(), uj * c_, uj * d_ * ui.adjoint(), ell_, rows_, cols_);
}

double validate_isometry(const Colligation& v, double tol) {
    const double defect = v.isometry_defect();
    if (!(defect <= tol)) {
        throw Error("validate_isometry: defect " + std::to_string(defect) + " exceeds " + std::to_string(tol));
    }
    return defect;
}

Colligation random_colligation(std::size_t rows, std::size_t cols, std::size_t ell, Rng& rng) {
    if (ell == 0 || rows == 0 || cols == 0) throw DimensionError("random_colligation: ell, I, J must be positive");
    if (cols < rows) {
        throw DimensionError("random_colligation: an isometry C + L^I -> C + L^J needs J >= I");
    }
    const CMatrix q = unitary_from_qr(rng.gaussian(1 + ell * cols, 1 + ell * rows));
    return Colligation::from_block(q, ell, rows, cols);
}

RealizedFunction::RealizedFunction(Colligation colligation, PolyMatrix delta)
    : colligation_(std::move(colligation)), delta_(std::move(delta)) {
    if (colligation_.rows() != delta_.rows() || colligation_.cols() != delta_.cols()) {
        throw DimensionError("RealizedFunction: colligation shape (" + std::to_string(colligation_.rows()) + "," +
                             std::to_string(colligation_.cols()) + ") does not match delta (" +
                             std::to_string(delta_.rows()) + "," + std::to_string(delta_.cols()) + ")");
    }
    isometric_ = colligation_.is_isometric();
}

CMatrix lift_delta(const CMatrix& delta_x, std::size_t rows, std::size_t cols, std::size_t n, std::size_t ell) {
    const auto nn = static_cast<Eigen::Index>(n);
    const auto block = static_cast<Eigen::Index>(ell * n);
    const CMatrix eye_ell = identity(ell);
    CMatrix out(static_cast<Eigen::Index>(rows) * block, static_cast<Eigen::Index>(cols) * block);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            out.block(ii * block, jj * block, block, block) = kron(eye_ell, delta_x.block(ii * nn, jj * nn, nn, nn));
        }
    }
    return out;
}

LiftedOperators lift(const RealizedFunction& f, const MatrixTuple& x) {
    const Colligation& v = f.colligation();
    LiftedOperators op;
    op.n = x.dim();
    const CMatrix eye_n = identity(op.n);
    op.delta = lift_delta(delta_eval(f.delta(), x), v.rows(), v.cols(), op.n, v.ell());
    op.b = kron(v.b(), eye_n);
    op.c = kron(v.c(), eye_n);
    op.d = kron(v.d(), eye_n);
    op.d_delta = op.d * op.delta;
    return op;
}

namespace {

void require_member(const RealizedFunction& f, const MatrixTuple& x, const char* who) {
    const Membership m = is_member(f.delta(), x, 0.0);
    if (!m.member) {
        throw DomainError(std::string(who) + ": point outside the domain, ||delta(x)|| = " + std::to_string(m.norm),
                          m.norm);
    }
}

}  // namespace

CMatrix eval_exact(const RealizedFunction& f, const MatrixTuple& x) {
    require_member(f, x, "eval_exact");
    const LiftedOperators op = lift(f, x);
    const auto dim = op.d_delta.rows();
    const SolveResult r = solve(CMatrix::Identity(dim, dim) - op.d_delta, op.c);
    return f.colligation().alpha() * identity(op.n) + op.b * (op.delta * r.x);
}

std::vector<NeumannReport> neumann_sweep(const RealizedFunction& f, const MatrixTuple& x, std::size_t max_terms) {
    const LiftedOperators op = lift(f, x);
    const Colligation& v = f.colligation();
    const double q = opnorm(op.d_delta);
    if (!(q < 1.0)) {
        throw DivergenceError("eval_neumann: ||D delta(x)|| = " + std::to_string(q) + " is not below 1", q);
    }
    // ||delta(x) (x) I_ell|| = ||delta(x)||, so the small matrix suffices.
    const double prefactor = opnorm(v.b()) * delta_norm(f.delta(), x) * opnorm(v.c()) / (1.0 - q);
    const CMatrix b_delta = op.b * op.delta;
    std::vector<NeumannReport> out;
    out.reserve(max_terms);
    CMatrix acc = v.alpha() * identity(op.n);
    CMatrix power = op.c;
    for (std::size_t k = 0; k < max_terms; ++k) {
        acc += b_delta * power;
        if (k + 1 < max_terms) power = op.d_delta * power;
        out.push_back({k + 1, q, prefactor * std::pow(q, static_cast<double>(k + 1)), acc});
    }
    return out;
}

NeumannReport eval_neumann(const RealizedFunction& f, const MatrixTuple& x, std::size_t m) {
    if (m == 0) {
        const LiftedOperators op = lift(f, x);
        const double q = opnorm(op.d_delta);
        if (!(q < 1.0)) throw DivergenceError("eval_neumann: ||D delta(x)|| = " + std::to_string(q), q);
        const double tail = opnorm(f.colligation().b()) * delta_norm(f.delta(), x) * opnorm(f.colligation().c()) /
                            (1.0 - q);
        return {0, q, tail, CMatrix(f.colligation().alpha() * identity(x.dim()))};
    }
    return std::move(neumann_sweep(f, x, m).back());
}

NeumannReport eval_neumann_auto(const RealizedFunction& f, const MatrixTuple& x, double rel_tol,
                                std::size_t max_terms) {
    const LiftedOperators op = lift(f, x);
    const Colligation& v = f.colligation();
    const double q = opnorm(op.d_delta);
    if (!(q < 1.0)) throw DivergenceError("eval_neumann_auto: ||D delta(x)|| = " + std::to_string(q), q);
    const double prefactor = opnorm(v.b()) * delta_norm(f.delta(), x) * opnorm(v.c()) / (1.0 - q);
    // ||value|| <= |alpha| + prefactor, so a value-independent m is found first
    // and then tightened against the actual value.
    std::size_t m = 0;
    double tail = prefactor;
    while (m < max_terms && tail > rel_tol) {
        ++m;
        tail *= q;
    }
    NeumannReport rep = eval_neumann(f, x, m);
    while (rep.terms_used > 1) {
        const double tighter = prefactor * std::pow(q, static_cast<double>(rep.terms_used - 1));
        if (tighter > rel_tol * (1.0 + opnorm(rep.value))) break;
        rep = eval_neumann(f, x, rep.terms_used - 1);
    }
    return rep;
}

DefectReport defect_check(const RealizedFunction& f, const MatrixTuple& x) {
    const CMatrix value = eval_exact(f, x);
    const LiftedOperators op = lift(f, x);
    const auto dim = op.d_delta.rows();
    const CMatrix y = solve(CMatrix::Identity(dim, dim) - op.d_delta, op.c).x;
    const auto lj = op.delta.cols();
    const CMatrix middle = CMatrix::Identity(lj, lj) - op.delta.adjoint() * op.delta;
    const CMatrix rhs = y.adjoint() * middle * y;
    const CMatrix lhs = identity(op.n) - value.adjoint() * value;
    DefectReport rep;
    rep.residual = opnorm(lhs - rhs);
    rep.min_eig = min_eig_hermitian(lhs);
    return rep;
}

CMatrix mobius_apply(Complex alpha, const CMatrix& z) {
    if (!(std::abs(alpha) < 1.0)) throw DomainError("mobius_apply: |alpha| must be below 1", std::abs(alpha));
    const double zn = opnorm(z);
    if (!(zn < 1.0)) throw DomainError("mobius_apply: ||Z|| = " + std::to_string(zn) + " is not below 1", zn);
    const auto n = z.rows();
    const CMatrix eye = CMatrix::Identity(n, n);
    // (Z - alpha) and (I - conj(alpha) Z)^-1 commute.
    return solve(eye - std::conj(alpha) * z, z - alpha * eye).x;
}

MobiusSeries mobius_series(Complex alpha, const CMatrix& z, std::size_t m) {
    const double a = std::abs(alpha);
    if (!(a < 1.0)) throw DomainError("mobius_series: |alpha| must be below 1", a);
    const double zn = opnorm(z);
    if (!(zn < 1.0)) throw DomainError("mobius_series: ||Z|| = " + std::to_string(zn) + " is not below 1", zn);
    const auto n = z.rows();
    MobiusSeries out;
    out.value = -alpha * CMatrix::Identity(n, n);
    CMatrix power = z;
    Complex weight = 1.0 - a * a;
    for (std::size_t k = 1; k <= m; ++k) {
        out.value += weight * power;
        if (k < m) {
            power = power * z;
            weight *= std::conj(alpha);
        }
    }
    out.tail_bound = (1.0 - a * a) * std::pow(zn, static_cast<double>(m + 1)) / (1.0 - a * zn);
    return out;
}

MatrixTuple upper_block_tuple(const MatrixTuple& a, const MatrixTuple& h, double eps) {
    if (a.size() != h.size() || a.dim() != h.dim()) throw DimensionError("upper_block_tuple: a and h differ in shape");
    const auto n = static_cast<Eigen::Index>(a.dim());
    std::vector<CMatrix> parts;
    parts.reserve(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        CMatrix blk = CMatrix::Zero(2 * n, 2 * n);
        blk.topLeftCorner(n, n) = a[r];
        blk.bottomRightCorner(n, n) = a[r];
        blk.topRightCorner(n, n) = eps * h[r];
        parts.push_back(std::move(blk));
    }
    return MatrixTuple(std::move(parts));
}

CMatrix block_derivative(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& a, const MatrixTuple& h,
                         double eps) {
    if (!(eps > 0.0)) throw Error("block_derivative: eps must be positive");
    const MatrixTuple blk = upper_block_tuple(a, h, eps);
    const Membership m = is_member(delta, blk, 0.0);
    if (!m.member) {
        throw DomainError("block_derivative: block tuple leaves the domain (||delta|| = " + std::to_string(m.norm) +
                              "); retry with eps <= " + std::to_string(eps / 4),
                          m.norm, eps / 4);
    }
    const CMatrix value = f(blk);
    const auto n = static_cast<Eigen::Index>(a.dim());
    return value.topRightCorner(n, n) / eps;
}

CMatrix block_derivative(const RealizedFunction& f, const MatrixTuple& a, const MatrixTuple& h, double eps) {
    if (eps <= 0.0) eps = 1e-2 * (1.0 - delta_norm(f.delta(), a));
    if (!(eps > 0.0)) throw DomainError("block_derivative: base point is not inside the domain", 1.0 - eps * 100);
    return block_derivative(as_map(f), f.delta(), a, h, eps);
}

double off_scalar_mass(const CMatrix& f0) {
    const auto n = f0.rows();
    const Complex mean = f0.trace() / static_cast<double>(n);
    return opnorm(f0 - mean * CMatrix::Identity(n, n));
}

Complex scalar_at_origin(const CMatrix& f0, double tol) {
    const double mass = off_scalar_mass(f0);
    if (!(mass <= tol)) throw Error("scalar_at_origin: F(0) is not scalar (off-scalar mass " + std::to_string(mass) + ")");
    return f0.trace() / static_cast<double>(f0.rows());
}

TupleMap compose_mobius(TupleMap f, Complex alpha) {
    if (!(std::abs(alpha) < 1.0)) throw DomainError("compose_mobius: |alpha| must be below 1", std::abs(alpha));
    return [f = std::move(f), alpha](const MatrixTuple& x) { return mobius_apply(alpha, f(x)); };
}

TupleMap as_map(RealizedFunction f) {
    return [f = std::move(f)](const MatrixTuple& x) { return eval_exact(f, x); };
}

}  // namespace freeholo
