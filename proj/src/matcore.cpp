#include "freeholo/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace freeholo {

MatrixTuple::MatrixTuple(std::vector<CMatrix> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw DimensionError("MatrixTuple: at least one part is required");
    }
    dim_ = static_cast<std::size_t>(parts_.front().rows());
    for (const auto& p : parts_) {
        if (static_cast<std::size_t>(p.rows()) != dim_ || static_cast<std::size_t>(p.cols()) != dim_) {
            throw DimensionError("MatrixTuple: parts must all be " + std::to_string(dim_) + "x" +
                                 std::to_string(dim_));
        }
    }
}

MatrixTuple MatrixTuple::zeros(std::size_t d, std::size_t n) {
    return MatrixTuple(std::vector<CMatrix>(d, CMatrix::Zero(n, n)));
}

MatrixTuple MatrixTuple::scaled(Complex lambda) const {
    std::vector<CMatrix> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(lambda * p);
    return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::conjugated(const CMatrix& s) const {
    std::vector<CMatrix> out;
    out.reserve(parts_.size());
    // s x s^-1 = (s^-* (s x)^*)^*
    const CMatrix s_adj = s.adjoint();
    for (const auto& p : parts_) {
        const CMatrix sx = matmul(s, p);
        out.push_back(solve(s_adj, sx.adjoint()).x.adjoint());
    }
    return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::compressed(const CMatrix& u) const {
    std::vector<CMatrix> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(u.adjoint() * p * u);
    return MatrixTuple(std::move(out));
}

CMatrix identity(std::size_t n) { return CMatrix::Identity(n, n); }

CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix::Zero(rows, cols); }

CMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
    if (i < 1 || j < 1 || i > n || j > n) throw DimensionError("unit: index out of range");
    CMatrix e = CMatrix::Zero(n, n);
    e(i - 1, j - 1) = 1.0;
    return e;
}

CMatrix corner_projection(std::size_t n, std::size_t k) {
    if (k > n) throw DimensionError("corner_projection: k exceeds n");
    CMatrix p = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < k; ++i) p(i, i) = 1.0;
    return p;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    return a * b;
}

CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix blkdiag(std::span<const CMatrix> blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

CMatrix block_assemble(const std::vector<std::vector<CMatrix>>& grid) {
    if (grid.empty() || grid.front().empty()) throw DimensionError("block_assemble: empty grid");
    const std::size_t ncols = grid.front().size();
    std::vector<Eigen::Index> heights(grid.size()), widths(ncols);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].size() != ncols) throw DimensionError("block_assemble: ragged grid");
        heights[i] = grid[i].front().rows();
    }
    for (std::size_t j = 0; j < ncols; ++j) widths[j] = grid.front()[j].cols();
    Eigen::Index total_rows = 0, total_cols = 0;
    for (auto h : heights) total_rows += h;
    for (auto w : widths) total_cols += w;

    CMatrix out(total_rows, total_cols);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::Index c = 0;
        for (std::size_t j = 0; j < ncols; ++j) {
            const CMatrix& b = grid[i][j];
            if (b.rows() != heights[i] || b.cols() != widths[j]) {
                throw DimensionError("block_assemble: block (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") does not match its row/column extents");
            }
            out.block(r, c, b.rows(), b.cols()) = b;
            c += widths[j];
        }
        r += heights[i];
    }
    return out;
}

MatrixTuple direct_sum(std::span<const MatrixTuple> tuples) {
    if (tuples.empty()) throw DimensionError("direct_sum: no tuples");
    const std::size_t d = tuples.front().size();
    std::vector<CMatrix> parts;
    parts.reserve(d);
    std::vector<CMatrix> blocks(tuples.size());
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            if (tuples[t].size() != d) throw DimensionError("direct_sum: tuples differ in d");
            blocks[t] = tuples[t][r];
        }
        parts.push_back(blkdiag(blocks));
    }
    return MatrixTuple(std::move(parts));
}

double opnorm_power(const CMatrix& a, double tol, int max_iter) {
    if (a.size() == 0) return 0.0;
    // Deterministic start vector with no special alignment.
    Eigen::VectorXcd v(a.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        v(i) = Complex(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i)),
                       0.21 * std::cos(0.7 * static_cast<double>(i)));
    }
    v.normalize();
    // Rayleigh quotient v*(A*A)v converges at twice the rate of the iterate itself.
    double lambda = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXcd av = a * v;
        const double rq = av.squaredNorm();
        if (rq == 0.0) return 0.0;
        const bool settled = std::abs(rq - lambda) <= tol * rq;
        lambda = rq;
        stable = settled ? stable + 1 : 0;
        if (stable >= 3) break;
        Eigen::VectorXcd w = a.adjoint() * av;
        v = w / w.norm();
    }
    return std::sqrt(lambda);
}

double opnorm(const CMatrix& a) {
    if (!all_finite(a)) throw Error("opnorm: non-finite entries");
    if (a.size() == 0) return 0.0;
    if (static_cast<std::size_t>(std::max(a.rows(), a.cols())) <= kSvdNormLimit) {
        Eigen::BDCSVD<CMatrix> svd(a);
        return svd.singularValues()(0);
    }
    return opnorm_power(a);
}

SolveResult solve(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols()) throw DimensionError("solve: matrix is not square");
    if (a.rows() != b.rows()) throw DimensionError("solve: right-hand side has wrong row count");
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double rcond = a.size() == 0 ? 1.0 : lu.rcond();
    if (!(rcond >= kSingularityFloor)) {
        const double reported = std::isnan(rcond) ? 0.0 : rcond;
        throw SingularError("solve: matrix singular to tolerance (rcond = " + std::to_string(reported) + ")",
                            reported);
    }
    SolveResult out;
    out.x = lu.solve(b);
    out.rcond = rcond;
    const double bnorm = b.norm();
    out.residual = bnorm == 0.0 ? (a * out.x).norm() : (a * out.x - b).norm() / bnorm;
    return out;
}

double min_eig_hermitian(const CMatrix& a, double herm_tol) {
    if (a.rows() != a.cols()) throw DimensionError("min_eig_hermitian: matrix is not square");
    if (a.size() == 0) throw DimensionError("min_eig_hermitian: empty matrix");
    const double scale = opnorm(a);
    if (opnorm(a - a.adjoint()) > herm_tol * std::max(scale, 1e-300)) {
        throw Error("min_eig_hermitian: matrix is not Hermitian to tolerance");
    }
    const CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

CMatrix unitary_from_qr(const CMatrix& g) {
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(g.rows(), g.cols());
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols() && j < r.rows(); ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

bool all_finite(const CMatrix& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) return false;
    }
    return true;
}

}  // namespace freeholo
