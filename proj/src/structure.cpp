#include "prony/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "prony/error.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// powers[i][m] = z_i^m, m = 0..n
std::vector<std::vector<Complex>> coordinate_powers(const ParameterPoint& p, int n)
{
    const std::size_t d = dimension_of(p);
    std::vector<std::vector<Complex>> powers(d, std::vector<Complex>(static_cast<std::size_t>(n) + 1));
    if (const auto* tp = std::get_if<TorusPoint>(&p)) {
        for (std::size_t i = 0; i < d; ++i) {
            for (int m = 0; m <= n; ++m) {
                const double x = static_cast<double>(m) * tp->t[i];
                powers[i][static_cast<std::size_t>(m)] = std::polar(1.0, kTwoPi * (x - std::floor(x)));
            }
        }
    } else {
        const auto& z = std::get<ComplexPoint>(p).z;
        for (std::size_t i = 0; i < d; ++i) {
            Complex acc{1.0, 0.0};
            for (int m = 0; m <= n; ++m) {
                powers[i][static_cast<std::size_t>(m)] = acc;
                acc *= z[i];
            }
        }
    }
    return powers;
}

std::size_t grid_stride_offset(std::span<const int> k, std::size_t side)
{
    std::size_t pos = 0;
    for (std::size_t i = k.size(); i-- > 0;) {
        pos = pos * side + static_cast<std::size_t>(k[i]);
    }
    return pos;
}

} // namespace

std::size_t IndexSet::box_code(std::span<const int> k) const
{
    return grid_stride_offset(k, static_cast<std::size_t>(n_) + 1);
}

std::optional<std::size_t> IndexSet::position(std::span<const int> k) const
{
    if (k.size() != static_cast<std::size_t>(d_)) {
        return std::nullopt;
    }
    for (int ki : k) {
        if (ki < 0 || ki > n_) {
            return std::nullopt;
        }
    }
    const std::size_t code = box_code(k);
    if (kind_ == IndexKind::Box) {
        return code;
    }
    const std::ptrdiff_t pos = lookup_[code];
    if (pos < 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(pos);
}

IndexSet index_set_box(int d, int n)
{
    if (d < 1 || n < 0) {
        throw Error(ErrorCode::InvalidArgument, "index set needs d >= 1 and n >= 0");
    }
    IndexSet set(IndexKind::Box, d, n);
    const std::size_t side = static_cast<std::size_t>(n) + 1;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= side;
    }
    set.indices_.reserve(total);
    for (std::size_t pos = 0; pos < total; ++pos) {
        MultiIndex k(static_cast<std::size_t>(d));
        std::size_t rest = pos;
        for (auto& ki : k) {
            ki = static_cast<int>(rest % side);
            rest /= side;
        }
        set.indices_.push_back(std::move(k));
    }
    return set;
}

IndexSet index_set_simplex(int d, int n)
{
    const IndexSet box = index_set_box(d, n);
    IndexSet set(IndexKind::Simplex, d, n);
    for (const MultiIndex& k : box.indices()) {
        if (std::accumulate(k.begin(), k.end(), 0) <= n) {
            set.indices_.push_back(k);
        }
    }
    std::stable_sort(set.indices_.begin(), set.indices_.end(), [](const MultiIndex& a, const MultiIndex& b) {
        return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
    });
    set.lookup_.assign(box.size(), -1);
    for (std::size_t i = 0; i < set.indices_.size(); ++i) {
        set.lookup_[set.box_code(set.indices_[i])] = static_cast<std::ptrdiff_t>(i);
    }
    return set;
}

SparseMoments sample_moments_at(const ExponentialSum& model, const std::vector<MultiIndex>& ks)
{
    SparseMoments out;
    for (const MultiIndex& k : ks) {
        out.emplace(k, eval_moment(model, k));
    }
    return out;
}

MomentMatrix build_toeplitz(const MomentGrid& grid) { return build_toeplitz(grid, grid.order()); }

MomentMatrix build_toeplitz(const MomentGrid& grid, int n)
{
    if (n < 0 || n > grid.order()) {
        throw Error(ErrorCode::IncompleteGrid, "Toeplitz order " + std::to_string(n) + " needs a grid of order >= "
                                                   + std::to_string(n) + ", got " + std::to_string(grid.order()));
    }
    IndexSet box = index_set_box(grid.dimension(), n);
    const std::size_t N = box.size();
    const std::size_t side = static_cast<std::size_t>(2 * grid.order() + 1);

    // offset(k - l) = center + g(k) - g(l) with g the grid stride map
    std::vector<std::ptrdiff_t> g(N);
    for (std::size_t a = 0; a < N; ++a) {
        g[a] = static_cast<std::ptrdiff_t>(grid_stride_offset(box[a], side));
    }
    const MultiIndex center_k(static_cast<std::size_t>(grid.dimension()), grid.order());
    const auto center = static_cast<std::ptrdiff_t>(grid_stride_offset(center_k, side));

    const auto values = grid.values();
    Matrix T(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t col = 0; col < N; ++col) {
        for (std::size_t row = 0; row < N; ++row) {
            T(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))
                = values[static_cast<std::size_t>(center + g[row] - g[col])];
        }
    }
    return MomentMatrix{MatrixKind::Toeplitz, std::move(box), std::move(T)};
}

MomentMatrix build_hankel(const MomentGrid& grid, int n)
{
    if (n < 0 || 2 * n > grid.order()) {
        throw Error(ErrorCode::IncompleteGrid, "Hankel order " + std::to_string(n) + " needs moments up to order "
                                                   + std::to_string(2 * n) + ", grid has "
                                                   + std::to_string(grid.order()));
    }
    IndexSet simplex = index_set_simplex(grid.dimension(), n);
    const auto S = static_cast<Eigen::Index>(simplex.size());
    Matrix H(S, S);
    MultiIndex sum(static_cast<std::size_t>(grid.dimension()));
    for (Eigen::Index a = 0; a < S; ++a) {
        for (Eigen::Index b = 0; b < S; ++b) {
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] = simplex[static_cast<std::size_t>(a)][i] + simplex[static_cast<std::size_t>(b)][i];
            }
            H(a, b) = grid.at(sum);
        }
    }
    return MomentMatrix{MatrixKind::Hankel, std::move(simplex), std::move(H)};
}

MomentMatrix build_hankel(const SparseMoments& samples, int d, int n)
{
    IndexSet simplex = index_set_simplex(d, n);
    const auto S = static_cast<Eigen::Index>(simplex.size());
    Matrix H(S, S);
    MultiIndex sum(static_cast<std::size_t>(d));
    for (Eigen::Index a = 0; a < S; ++a) {
        for (Eigen::Index b = 0; b < S; ++b) {
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] = simplex[static_cast<std::size_t>(a)][i] + simplex[static_cast<std::size_t>(b)][i];
            }
            const auto it = samples.find(sum);
            if (it == samples.end()) {
                throw Error(ErrorCode::IncompleteGrid, "Hankel matrix needs a moment that was not supplied");
            }
            H(a, b) = it->second;
        }
    }
    return MomentMatrix{MatrixKind::Hankel, std::move(simplex), std::move(H)};
}

Matrix build_vandermonde(const std::vector<ParameterPoint>& params, const IndexSet& index_set)
{
    const auto M = static_cast<Eigen::Index>(params.size());
    const auto N = static_cast<Eigen::Index>(index_set.size());
    Matrix A(M, N);
    for (Eigen::Index j = 0; j < M; ++j) {
        const auto& p = params[static_cast<std::size_t>(j)];
        if (dimension_of(p) != static_cast<std::size_t>(index_set.dimension())) {
            throw Error(ErrorCode::InvalidArgument, "parameter dimension does not match the index set");
        }
        const auto powers = coordinate_powers(p, index_set.order());
        for (Eigen::Index c = 0; c < N; ++c) {
            const MultiIndex& k = index_set[static_cast<std::size_t>(c)];
            Complex v{1.0, 0.0};
            for (std::size_t i = 0; i < k.size(); ++i) {
                v *= powers[i][static_cast<std::size_t>(k[i])];
            }
            A(j, c) = v;
        }
    }
    return A;
}

Complex eval_polynomial(const IndexSet& index_set, std::span<const Complex> coeffs, std::span<const Complex> z)
{
    if (coeffs.size() != index_set.size() || z.size() != static_cast<std::size_t>(index_set.dimension())) {
        throw Error(ErrorCode::InvalidArgument, "polynomial evaluation size mismatch");
    }
    const auto powers = coordinate_powers(ComplexPoint{{z.begin(), z.end()}}, index_set.order());
    Complex sum{};
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
        Complex v = coeffs[c];
        for (std::size_t i = 0; i < z.size(); ++i) {
            v *= powers[i][static_cast<std::size_t>(index_set[c][i])];
        }
        sum += v;
    }
    return sum;
}

RealVector triangular_weights(int d, int n)
{
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "triangular weights need n >= 1");
    }
    const IndexSet box = index_set_box(d, n);
    RealVector w(static_cast<Eigen::Index>(box.size()));
    for (std::size_t a = 0; a < box.size(); ++a) {
        double v = 1.0;
        for (int k : box[a]) {
            v *= static_cast<double>(std::max(std::min(k + 1, n + 1 - k), 1));
        }
        w(static_cast<Eigen::Index>(a)) = v;
    }
    return w;
}

Matrix apply_weights(const Matrix& T, const RealVector& w)
{
    if (w.size() != T.rows() || T.rows() != T.cols()) {
        throw Error(ErrorCode::InvalidArgument, "weight vector does not match the matrix");
    }
    return w.asDiagonal() * T * w.asDiagonal();
}

} // namespace prony
