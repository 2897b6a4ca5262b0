#ifndef PRONY_KERNEL_HPP
#define PRONY_KERNEL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "prony/error.hpp"
#include "prony/structure.hpp"

namespace prony {

enum class DecomposeMethod {
    /// FullSvd up to DecomposeOptions::auto_full_limit, RankRevealing above.
    Auto,
    FullSvd,
    /// Column-pivoted Householder QR of T^H stopped one step past the
    /// numerical rank, then an SVD of the small triangular factor. Only the
    /// leading singular values are reported.
    RankRevealing,
};

struct DecomposeOptions {
    double rel_tol = 1e-10;
    std::optional<int> rank_override;
    DecomposeMethod method = DecomposeMethod::Auto;
    std::size_t auto_full_limit = 1500;
};

struct SpectralDecomposition {
    IndexSet index_set;
    /// Nonincreasing. Length N when `complete`, otherwise the leading values only.
    RealVector singular_values;
    /// N x N unitary; the first `rank` columns span the signal space, the
    /// remaining columns the kernel. For a Toeplitz input these are right
    /// singular vectors of the transpose (f(l-k)), whose kernel consists of
    /// the coefficient vectors of polynomials vanishing on the parameters;
    /// the kernel of T itself is the complex conjugate.
    Matrix right_vectors;
    int rank = 0;
    double rel_tol = 0.0;
    /// sigma_rank / sigma_{rank+1}; +inf when the next value is zero or rank == N.
    double spectral_gap = 0.0;
    bool complete = true;
    /// Upper bound on the singular values that were not computed.
    double residual_bound = 0.0;
    std::vector<Warning> warnings;
};

SpectralDecomposition decompose(const MomentMatrix& T, const DecomposeOptions& options = {});

enum class BasisRole { Kernel, Signal };

/// Orthonormal coefficient vectors (columns) over an index set.
struct PolynomialBasis {
    BasisRole role;
    IndexSet index_set;
    Matrix vectors;
    /// Orthonormal basis of the orthogonal complement, when known.
    std::optional<Matrix> complement;

    std::size_t size() const { return static_cast<std::size_t>(vectors.cols()); }
};

/// Throws EmptyKernel when the numerical rank equals N.
PolynomialBasis kernel_basis(const SpectralDecomposition& dec);
PolynomialBasis signal_basis(const SpectralDecomposition& dec);

/// Complement of the basis, computed by Householder QR when not cached.
Matrix complement_of(const PolynomialBasis& basis);

/// Orthonormal bases (span(B), span(B)^perp) for a full-column-rank N x r matrix B.
std::pair<Matrix, Matrix> orthonormal_split(const Matrix& B);

/// Kernel and signal bases of T from a decomposition of diag(w) T diag(w).
std::pair<PolynomialBasis, PolynomialBasis> unweighted_bases(const SpectralDecomposition& weighted,
                                                             const RealVector& w);

/// Upper bound on cond_2(W T W) for q-separated parameters with positive
/// coefficients:
///   ((nq)^(d+1) + (2d)^(d+1)) / ((nq)^(d+1) - (2d)^(d+1)) * fmax / fmin.
/// Returns +inf when n q <= 2d (not applicable).
double condition_bound(int d, int n, double q, double fmax, double fmin);

/// sigma_1 / sigma_rank of diag(w) T diag(w).
double empirical_condition(const Matrix& T, const RealVector& w, int rank);

} // namespace prony

#endif
