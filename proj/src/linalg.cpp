#include "whsim/linalg.hpp"

#include "whsim/errors.hpp"

#include <cmath>
#include <utility>

namespace whsim {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionMismatch("ComplexMatrix: entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("add: shapes differ");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] += b.entries()[i];
    return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("subtract: shapes differ");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] -= b.entries()[i];
    return out;
}

ComplexMatrix scale(const ComplexMatrix& a, cdouble factor) {
    ComplexMatrix out = a;
    for (auto& e : out.entries()) e *= factor;
    return out;
}

std::vector<cdouble> matvec(const ComplexMatrix& a, const std::vector<cdouble>& x) {
    if (a.cols() != x.size()) throw DimensionMismatch("matvec: dimensions differ");
    std::vector<cdouble> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cdouble acc{};
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& e : a.entries()) s += std::norm(e);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& e : a.entries()) m = std::max(m, std::abs(e));
    return m;
}

double trace_real(const ComplexMatrix& a) {
    double s = 0.0;
    const std::size_t n = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < n; ++i) s += a(i, i).real();
    return s;
}

bool is_finite(const ComplexMatrix& a) {
    for (const auto& e : a.entries()) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    }
    return true;
}

void require_finite(const ComplexMatrix& a, const std::string& what) {
    if (!is_finite(a)) throw DegenerateBlock(what + ": non-finite entries");
}

bool is_hermitian(const ComplexMatrix& a, double rtol) {
    if (a.rows() != a.cols()) return false;
    const double tol = rtol * std::max(max_abs(a), 1e-300);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
        }
    }
    return true;
}

ComplexMatrix hermitian_symmetrize(const ComplexMatrix& x) {
    if (x.rows() != x.cols()) throw DimensionMismatch("hermitian_symmetrize: matrix not square");
    ComplexMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            out(i, j) = (x(i, j) + std::conj(x(j, i))) * 0.5;
    return out;
}

ComplexMatrix cholesky_factor(const ComplexMatrix& sigma) {
    const std::size_t n = sigma.rows();
    if (n != sigma.cols()) throw DimensionMismatch("cholesky_factor: matrix not square");
    if (!is_hermitian(sigma)) {
        throw NotPositiveDefinite("cholesky_factor: matrix not Hermitian within tolerance");
    }
    const double pivot_floor =
        1e-12 * std::max(trace_real(sigma), 0.0) / static_cast<double>(n == 0 ? 1 : n);

    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < j; ++k) s += std::norm(l(j, k));
        const double d = sigma(j, j).real() - s;
        if (!(d > pivot_floor)) {
            throw NotPositiveDefinite("cholesky_factor: pivot below floor at column " +
                                      std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cdouble acc = sigma(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

ComplexMatrix with_jitter(const ComplexMatrix& sigma) {
    const std::size_t n = sigma.rows();
    if (n == 0) return sigma;
    const double eps = 1e-10 * trace_real(sigma) / static_cast<double>(n);
    ComplexMatrix out = sigma;
    for (std::size_t i = 0; i < n; ++i) out(i, i) += eps;
    return out;
}

ComplexMatrix solve_lower(const ComplexMatrix& l, const ComplexMatrix& b) {
    const std::size_t n = l.rows();
    if (n != l.cols() || b.rows() != n) throw DimensionMismatch("solve_lower: shapes differ");
    ComplexMatrix x = b;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            cdouble acc = x(i, j);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * x(k, j);
            x(i, j) = acc / l(i, i);
        }
    }
    return x;
}

ComplexMatrix solve_lower_adjoint(const ComplexMatrix& l, const ComplexMatrix& b) {
    const std::size_t n = l.rows();
    if (n != l.cols() || b.rows() != n) throw DimensionMismatch("solve_lower_adjoint: shapes differ");
    ComplexMatrix x = b;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t ii = n; ii-- > 0;) {
            cdouble acc = x(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) acc -= std::conj(l(k, ii)) * x(k, j);
            x(ii, j) = acc / std::conj(l(ii, ii));
        }
    }
    return x;
}

ComplexMatrix hpd_solve(const ComplexMatrix& sigma, const ComplexMatrix& b) {
    const ComplexMatrix l = cholesky_factor(sigma);
    return solve_lower_adjoint(l, solve_lower(l, b));
}

std::vector<cdouble> hpd_solve(const ComplexMatrix& sigma, const std::vector<cdouble>& b) {
    ComplexMatrix col(b.size(), 1, std::vector<cdouble>(b.begin(), b.end()));
    ComplexMatrix x = hpd_solve(sigma, col);
    return x.entries();
}

ComplexMatrix hpd_inverse(const ComplexMatrix& sigma) {
    return hpd_solve(sigma, ComplexMatrix::identity(sigma.rows()));
}

double log_det_hermitian_pd(const ComplexMatrix& sigma) {
    const ComplexMatrix l = cholesky_factor(sigma);
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
    return 2.0 * s;
}

namespace {

ComplexMatrix submatrix(const ComplexMatrix& m, std::size_t r0, std::size_t c0,
                        std::size_t rows, std::size_t cols) {
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out(i, j) = m(r0 + i, c0 + j);
    return out;
}

} // namespace

BlockInverse block_inverse(const ComplexMatrix& sigma, std::size_t n_s, std::size_t n_n) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != n_s + n_n) {
        throw DimensionMismatch("block_inverse: sigma is not (n_s+n_n) square");
    }
    if (!is_hermitian(sigma)) {
        throw NotPositiveDefinite("block_inverse: sigma not Hermitian within tolerance");
    }

    BlockInverse out;
    if (n_n == 0) {
        out.a = hermitian_symmetrize(hpd_inverse(sigma));
        out.b = ComplexMatrix(n_s, 0);
        out.c = ComplexMatrix(0, 0);
        return out;
    }

    const ComplexMatrix s_ss = submatrix(sigma, 0, 0, n_s, n_s);
    const ComplexMatrix s_sn = submatrix(sigma, 0, n_s, n_s, n_n);
    const ComplexMatrix s_nn = submatrix(sigma, n_s, n_s, n_n, n_n);

    const ComplexMatrix nn_inv = hermitian_symmetrize(hpd_inverse(s_nn));
    const ComplexMatrix sn_nninv = matmul(s_sn, nn_inv);                 // S_sn S_nn^{-1}
    const ComplexMatrix schur = hermitian_symmetrize(
        subtract(s_ss, matmul(sn_nninv, adjoint(s_sn))));                // S_ss - S_sn S_nn^{-1} S_sn^H
    out.a = hermitian_symmetrize(hpd_inverse(schur));
    out.b = scale(matmul(out.a, sn_nninv), -1.0);
    out.c = hermitian_symmetrize(
        add(nn_inv, matmul(adjoint(sn_nninv), matmul(out.a, sn_nninv))));
    return out;
}

ComplexMatrix assemble(const BlockInverse& blocks) {
    const std::size_t n_s = blocks.a.rows();
    const std::size_t n_n = blocks.c.rows();
    ComplexMatrix out(n_s + n_n, n_s + n_n);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_s; ++j) out(i, j) = blocks.a(i, j);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_n; ++j) {
            out(i, n_s + j) = blocks.b(i, j);
            out(n_s + j, i) = std::conj(blocks.b(i, j));
        }
    for (std::size_t i = 0; i < n_n; ++i)
        for (std::size_t j = 0; j < n_n; ++j) out(n_s + i, n_s + j) = blocks.c(i, j);
    return out;
}

} // namespace whsim
