#ifndef PRONY_STRUCTURE_HPP
#define PRONY_STRUCTURE_HPP

#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "prony/model.hpp"

namespace prony {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class IndexKind { Box, Simplex };

/// Ordered multi-index set.
///
/// Box: I_n = {0..n}^d, coordinate 1 fastest, position(k) = sum_i k_i (n+1)^(i-1).
/// Simplex: J_n = {k >= 0 : |k|_1 <= n}, ordered by total degree, then by
/// the box order within each degree.
class IndexSet {
public:
    IndexKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return d_; }
    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return indices_.size(); }

    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

    /// Position of k in the ordering, or nullopt if k is not a member.
    std::optional<std::size_t> position(std::span<const int> k) const;

    friend IndexSet index_set_box(int d, int n);
    friend IndexSet index_set_simplex(int d, int n);

private:
    IndexSet(IndexKind kind, int d, int n) : kind_(kind), d_(d), n_(n) {}

    std::size_t box_code(std::span<const int> k) const;

    IndexKind kind_;
    int d_;
    int n_;
    std::vector<MultiIndex> indices_;
    // box code -> position; only populated for the simplex kind
    std::vector<std::ptrdiff_t> lookup_;
};

IndexSet index_set_box(int d, int n);
IndexSet index_set_simplex(int d, int n);

enum class MatrixKind { Toeplitz, Hankel };

struct MomentMatrix {
    MatrixKind kind;
    IndexSet index_set;
    Matrix values;
};

/// Moments on an arbitrary finite index set (e.g. the nonnegative orthant).
using SparseMoments = std::map<MultiIndex, Complex>;

/// f(k) for every k in the given list.
SparseMoments sample_moments_at(const ExponentialSum& model, const std::vector<MultiIndex>& ks);

/// T_n = (f(k - l))_{k,l in I_n} with n = grid order.
MomentMatrix build_toeplitz(const MomentGrid& grid);
/// Toeplitz matrix of order n taken from a grid of order >= n.
MomentMatrix build_toeplitz(const MomentGrid& grid, int n);

/// H_n = (f(k + l))_{k,l in J_n}. Needs f on J_2n; the grid order must be >= 2n.
MomentMatrix build_hankel(const MomentGrid& grid, int n);
MomentMatrix build_hankel(const SparseMoments& samples, int d, int n);

/// Multivariate Vandermonde matrix (z_j^k)_{j, k in index set}, M x N.
Matrix build_vandermonde(const std::vector<ParameterPoint>& params, const IndexSet& index_set);

/// Evaluate sum_k c_k z^k over the index set at a complex point.
Complex eval_polynomial(const IndexSet& index_set, std::span<const Complex> coeffs,
                        std::span<const Complex> z);

/// Tensor-product triangular weights prod_i max(min(k_i + 1, n + 1 - k_i), 1)
/// in box order.
RealVector triangular_weights(int d, int n);

/// diag(w) T diag(w).
Matrix apply_weights(const Matrix& T, const RealVector& w);

} // namespace prony

#endif
