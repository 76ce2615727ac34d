#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace whsim {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major. All receiver-side covariances are
/// N x N with N <= 8, so no packed or sparse storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    std::size_t size() const { return entries_.size(); }

    cdouble& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<cdouble>& entries() const { return entries_; }
    std::vector<cdouble>& entries() { return entries_; }

    bool same_shape(const ComplexMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> entries_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cdouble factor);

std::vector<cdouble> matvec(const ComplexMatrix& a, const std::vector<cdouble>& x);

double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
/// Real part of the trace (covariance traces are real up to rounding).
double trace_real(const ComplexMatrix& a);

bool is_finite(const ComplexMatrix& a);
/// Throws DegenerateBlock when any entry is NaN or Inf.
void require_finite(const ComplexMatrix& a, const std::string& what);

/// Hermitian within `rtol` relative to the largest entry magnitude.
bool is_hermitian(const ComplexMatrix& a, double rtol = 1e-12);

/// X <- (X + X^H)/2. Exact fixed point on Hermitian input; the result is
/// Hermitian bit-exactly (diagonal imaginary parts come out signed zero).
ComplexMatrix hermitian_symmetrize(const ComplexMatrix& x);

/// Lower-triangular L with L L^H = sigma. Fails rather than regularizes:
/// a pivot below 1e-12 * trace/N throws NotPositiveDefinite. Callers that
/// want regularization add jitter explicitly (with_jitter) and retry.
ComplexMatrix cholesky_factor(const ComplexMatrix& sigma);

/// sigma + (1e-10 * trace/N) * I, the opt-in diagonal jitter.
ComplexMatrix with_jitter(const ComplexMatrix& sigma);

/// Solve L y = b for lower-triangular L (columns of b independently).
ComplexMatrix solve_lower(const ComplexMatrix& l, const ComplexMatrix& b);
/// Solve L^H x = b.
ComplexMatrix solve_lower_adjoint(const ComplexMatrix& l, const ComplexMatrix& b);

/// sigma^{-1} b for Hermitian PD sigma, via Cholesky.
ComplexMatrix hpd_solve(const ComplexMatrix& sigma, const ComplexMatrix& b);
std::vector<cdouble> hpd_solve(const ComplexMatrix& sigma, const std::vector<cdouble>& b);
ComplexMatrix hpd_inverse(const ComplexMatrix& sigma);

/// ln det(sigma) for Hermitian PD sigma.
double log_det_hermitian_pd(const ComplexMatrix& sigma);

/// Blocks of the inverse of a partitioned Hermitian PD covariance
///   sigma = [[S_ss, S_sn], [S_sn^H, S_nn]],
///   sigma^{-1} = [[a, b], [b^H, c]].
struct BlockInverse {
    ComplexMatrix a; // n_s x n_s
    ComplexMatrix b; // n_s x n_n
    ComplexMatrix c; // n_n x n_n
};

/// Schur-complement block inversion:
///   a = (S_ss - S_sn S_nn^{-1} S_sn^H)^{-1}
///   b = -a S_sn S_nn^{-1}
///   c = S_nn^{-1} + S_nn^{-1} S_sn^H a S_sn S_nn^{-1}
/// With n_n = 0 this degenerates to a = S_ss^{-1} and empty b, c.
BlockInverse block_inverse(const ComplexMatrix& sigma, std::size_t n_s, std::size_t n_n);

/// Reassemble [[a, b], [b^H, c]] into one matrix (test and diagnostics aid).
ComplexMatrix assemble(const BlockInverse& blocks);

} // namespace whsim
