#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freeholo/errors.hpp"

namespace freeholo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// A d-tuple of n x n complex matrices, the point x = (x^1, ..., x^d).
class MatrixTuple {
public:
    MatrixTuple() = default;
    /// Throws DimensionError unless every part is square of the same size and d >= 1.
    explicit MatrixTuple(std::vector<CMatrix> parts);

    /// The zero tuple with d parts of size n.
    static MatrixTuple zeros(std::size_t d, std::size_t n);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return parts_.size(); }
    const CMatrix& operator[](std::size_t r) const { return parts_[r]; }
    const std::vector<CMatrix>& parts() const noexcept { return parts_; }

    MatrixTuple scaled(Complex lambda) const;
    /// (s x^1 s^-1, ..., s x^d s^-1) computed by solves.
    MatrixTuple conjugated(const CMatrix& s) const;
    /// (u* x^1 u, ...) for any conformable u.
    MatrixTuple compressed(const CMatrix& u) const;

private:
    std::size_t dim_ = 0;
    std::vector<CMatrix> parts_;
};

/// Result of a checked linear solve.
struct SolveResult {
    CMatrix x;
    double residual = 0.0;  ///< ||A X - B|| / ||B|| (0 when B = 0)
    double rcond = 0.0;     ///< LU reciprocal condition estimate
};

// Tolerances shared across the kernel.
inline constexpr double kSingularityFloor = 1e-14;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr std::size_t kSvdNormLimit = 256;

CMatrix identity(std::size_t n);
CMatrix zeros(std::size_t rows, std::size_t cols);
/// Matrix unit E_ij (1-based indices as in E_12).
CMatrix unit(std::size_t n, std::size_t i, std::size_t j);
/// Orthogonal projection onto the first k basis vectors of C^n.
CMatrix corner_projection(std::size_t n, std::size_t k);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix blkdiag(std::span<const CMatrix> blocks);
/// Assembles a rectangular grid of blocks; block rows share heights, block columns share widths.
CMatrix block_assemble(const std::vector<std::vector<CMatrix>>& grid);
/// Block-diagonal direct sum of tuples with equal d.
MatrixTuple direct_sum(std::span<const MatrixTuple> tuples);

/// Largest singular value. Full SVD up to kSvdNormLimit, power iteration on A*A beyond.
double opnorm(const CMatrix& a);
/// Power iteration on A*A to relative accuracy tol; exposed for testing the large-n path.
double opnorm_power(const CMatrix& a, double tol = 1e-13, int max_iter = 20000);

/// Solves A X = B by partial-pivot LU. Throws SingularError when rcond < kSingularityFloor.
SolveResult solve(const CMatrix& a, const CMatrix& b);

/// Smallest eigenvalue of the Hermitian part of A. Throws if ||A - A*|| > herm_tol ||A||.
double min_eig_hermitian(const CMatrix& a, double herm_tol = kHermitianTol);

/// Haar-ish unitary from the QR factor of a given square matrix (phases fixed by diag(R)).
CMatrix unitary_from_qr(const CMatrix& g);

bool all_finite(const CMatrix& a);

}  // namespace freeholo
