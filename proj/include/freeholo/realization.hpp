#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "freeholo/domain.hpp"
#include "freeholo/matcore.hpp"
#include "freeholo/rng.hpp"

namespace freeholo {

inline constexpr double kIsoTol = 1e-10;
inline constexpr double kPsdSlack = 1e-9;

/// The block operator V = [[alpha, B], [C, D]] : C (+) L^I -> C (+) L^J with
/// auxiliary dimension ell = dim L.
///
/// L^I is laid out block-major: index (i, s) of L^I = C^I (x) C^ell sits at
/// i * ell + s. The same convention is used for L^J and for every lifted
/// operator built from delta(x).
class Colligation {
public:
    Colligation(Complex alpha, CMatrix b, CMatrix c, CMatrix d, std::size_t ell, std::size_t rows, std::size_t cols);
    /// Splits a (1 + ell*J) x (1 + ell*I) block matrix.
    static Colligation from_block(const CMatrix& v, std::size_t ell, std::size_t rows, std::size_t cols);

    Complex alpha() const noexcept { return alpha_; }
    const CMatrix& b() const noexcept { return b_; }
    const CMatrix& c() const noexcept { return c_; }
    const CMatrix& d() const noexcept { return d_; }
    std::size_t ell() const noexcept { return ell_; }
    /// Shape (I, J) of the delta this colligation pairs with.
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    CMatrix block() const;
    /// ||V*V - I||.
    double isometry_defect() const;
    bool is_isometric(double tol = kIsoTol) const { return isometry_defect() <= tol; }

    /// Same function, Lambda-basis changed by the unitary u (ell x ell):
    /// B -> B (I_I (x) u)*, C -> (I_J (x) u) C, D -> (I_J (x) u) D (I_I (x) u)*.
    Colligation rotated(const CMatrix& u) const;

private:
    Complex alpha_;
    CMatrix b_;
    CMatrix c_;
    CMatrix d_;
    std::size_t ell_;
    std::size_t rows_;
    std::size_t cols_;
};

/// Returns ||V*V - I||; throws Error when it exceeds tol.
double validate_isometry(const Colligation& v, double tol = kIsoTol);

/// Isometry from the QR factor of a complex Gaussian (1 + ell*J) x (1 + ell*I) matrix.
Colligation random_colligation(std::size_t rows, std::size_t cols, std::size_t ell, Rng& rng);

/// F(x) = alpha I + (I (x) B)(delta(x) (x) I_L)[I - (I (x) D)(delta(x) (x) I_L)]^-1 (I (x) C).
class RealizedFunction {
public:
    RealizedFunction(Colligation colligation, PolyMatrix delta);

    const Colligation& colligation() const noexcept { return colligation_; }
    const PolyMatrix& delta() const noexcept { return delta_; }
    /// False for re-centered or hand-made colligations; Schur checks are skipped for those.
    bool isometric() const noexcept { return isometric_; }

private:
    Colligation colligation_;
    PolyMatrix delta_;
    bool isometric_;
};

/// The operators of the realization formula at a fixed point, all acting on
/// L^. (x) C^n with the layout documented on Colligation.
struct LiftedOperators {
    std::size_t n = 0;
    CMatrix delta;      ///< (ell I n) x (ell J n), block (i,j) = I_ell (x) delta_ij(x)
    CMatrix b;          ///< n x (ell I n)
    CMatrix c;          ///< (ell J n) x n
    CMatrix d;          ///< (ell J n) x (ell I n)
    CMatrix d_delta;    ///< d * delta
};

/// delta(x) (x) I_ell laid out as documented on Colligation.
CMatrix lift_delta(const CMatrix& delta_x, std::size_t rows, std::size_t cols, std::size_t n, std::size_t ell);
LiftedOperators lift(const RealizedFunction& f, const MatrixTuple& x);

/// One linear solve. Throws DomainError outside {||delta(x)|| < 1}, SingularError
/// when the resolvent is singular to tolerance.
CMatrix eval_exact(const RealizedFunction& f, const MatrixTuple& x);

struct NeumannReport {
    std::size_t terms_used = 0;
    double q = 0.0;           ///< ||D delta(x)|| on the lifted space
    double tail_bound = 0.0;  ///< ||B|| ||delta(x)|| ||C|| q^m / (1 - q)
    CMatrix value;
};

/// alpha I + sum_{k<m} B delta (D delta)^k C. Throws DivergenceError when q >= 1.
NeumannReport eval_neumann(const RealizedFunction& f, const MatrixTuple& x, std::size_t m);
/// Reports for m = 1..max_terms sharing one lift and one set of norms.
std::vector<NeumannReport> neumann_sweep(const RealizedFunction& f, const MatrixTuple& x, std::size_t max_terms);
/// Smallest m with tail_bound <= 1e-12 (1 + ||value||), capped at 10^4.
NeumannReport eval_neumann_auto(const RealizedFunction& f, const MatrixTuple& x, double rel_tol = 1e-12,
                                std::size_t max_terms = 10000);

struct DefectReport {
    double residual = 0.0;  ///< ||(I - F*F) - C*[I - delta*D*]^-1 [I - delta*delta] [I - D delta]^-1 C||
    double min_eig = 0.0;   ///< smallest eigenvalue of I - F*F
};

DefectReport defect_check(const RealizedFunction& f, const MatrixTuple& x);

/// (Z - alpha I)(I - conj(alpha) Z)^-1. Requires |alpha| < 1 and ||Z|| < 1.
CMatrix mobius_apply(Complex alpha, const CMatrix& z);

struct MobiusSeries {
    CMatrix value;
    double tail_bound = 0.0;  ///< (1 - |alpha|^2) ||Z||^(m+1) / (1 - |alpha| ||Z||)
};

/// -alpha I + (1 - |alpha|^2) sum_{k=1}^m conj(alpha)^(k-1) Z^k.
MobiusSeries mobius_series(Complex alpha, const CMatrix& z, std::size_t m);

/// A graded map x -> F(x) on matrix tuples of any size.
using TupleMap = std::function<CMatrix(const MatrixTuple&)>;

/// F evaluated on the 2n-tuple [[a, eps h], [0, a]]; the (1,2) block over eps.
/// Exact for nc-functions; the domain only restricts how large eps may be.
CMatrix block_derivative(const TupleMap& f, const PolyMatrix& delta, const MatrixTuple& a, const MatrixTuple& h,
                         double eps);
/// Realized-function overload; eps <= 0 selects 1e-2 (1 - ||delta(a)||).
CMatrix block_derivative(const RealizedFunction& f, const MatrixTuple& a, const MatrixTuple& h, double eps = 0.0);

/// The block tuple [[a, eps h], [0, a]].
MatrixTuple upper_block_tuple(const MatrixTuple& a, const MatrixTuple& h, double eps);

/// alpha from F(0) = alpha I. Throws Error when the off-scalar mass exceeds tol.
Complex scalar_at_origin(const CMatrix& f0, double tol = 1e-10);
/// Off-scalar mass ||F0 - (tr F0 / n) I||.
double off_scalar_mass(const CMatrix& f0);

/// H = phi_alpha o F as a graded map.
TupleMap compose_mobius(TupleMap f, Complex alpha);

/// The realized function as a graded map.
TupleMap as_map(RealizedFunction f);

}  // namespace freeholo
