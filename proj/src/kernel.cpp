#include "prony/kernel.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Householder>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace prony {

namespace {

constexpr double kGapWarning = 10.0;

int threshold_rank(const RealVector& sigma, double rel_tol)
{
    if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
        return 0;
    }
    const double cut = rel_tol * sigma(0);
    int rank = 0;
    while (rank < sigma.size() && sigma(rank) > cut) {
        ++rank;
    }
    return rank;
}

double gap_at(const RealVector& sigma, int rank, Eigen::Index N, double tail_bound)
{
    if (rank == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (rank >= N) {
        return std::numeric_limits<double>::infinity();
    }
    const double next = rank < sigma.size() ? sigma(rank) : tail_bound;
    return next > 0.0 ? sigma(rank - 1) / next : std::numeric_limits<double>::infinity();
}

struct TruncatedFactor {
    RealVector sigma;
    Matrix right_vectors;
    double residual = 0.0;
    bool complete = false;
};

// Column-pivoted Householder QR of T^H, stopped once the trailing block is
// negligible against rel_tol * sigma_1, followed by an SVD of the leading
// rows of R. Left singular vectors of T^H are the right singular vectors of T.
TruncatedFactor rank_revealing(const Matrix& T, double rel_tol, int min_steps)
{
    const Eigen::Index N = T.rows();
    Matrix X = T.adjoint();
    Vector tau = Vector::Zero(N);
    Vector workspace(N);
    Eigen::VectorXd col_norm2(N);

    double largest = 0.0;
    double residual = 0.0;
    Eigen::Index steps = 0;
    for (Eigen::Index j = 0; j < N; ++j) {
        const Eigen::Index rows = N - j;
        Eigen::Index pivot = j;
        double total = 0.0;
        for (Eigen::Index c = j; c < N; ++c) {
            col_norm2(c) = X.col(c).tail(rows).squaredNorm();
            total += col_norm2(c);
            if (col_norm2(c) > col_norm2(pivot)) {
                pivot = c;
            }
        }
        if (j == 0) {
            largest = std::sqrt(col_norm2(pivot));
        }
        residual = std::sqrt(total);
        if (j >= min_steps && residual <= 0.01 * rel_tol * largest) {
            break;
        }
        if (pivot != j) {
            X.col(j).swap(X.col(pivot));
        }
        double beta = 0.0;
        X.col(j).tail(rows).makeHouseholderInPlace(tau(j), beta);
        X(j, j) = beta;
        if (rows > 1) {
            X.bottomRightCorner(rows, N - j - 1)
                .applyHouseholderOnTheLeft(X.col(j).tail(rows - 1), tau(j), workspace.data());
        }
        steps = j + 1;
        residual = 0.0;
    }

    TruncatedFactor out;
    out.residual = residual;
    out.complete = steps == N;

    Matrix R = Matrix::Zero(steps, N);
    for (Eigen::Index r = 0; r < steps; ++r) {
        R.row(r).tail(N - r) = X.row(r).tail(N - r);
    }
    // the sequence holds a reference to its coefficients
    const Vector q_coeffs = tau.conjugate();
    Eigen::HouseholderSequence<Matrix, Vector> seq(X, q_coeffs);
    seq.setLength(steps);
    Matrix Q = seq;

    out.right_vectors = std::move(Q);
    if (steps > 0) {
        Eigen::BDCSVD<Matrix> svd(R, Eigen::ComputeFullU);
        out.sigma = svd.singularValues();
        out.right_vectors.leftCols(steps) = (out.right_vectors.leftCols(steps) * svd.matrixU()).eval();
    }
    return out;
}

} // namespace

SpectralDecomposition decompose(const MomentMatrix& T, const DecomposeOptions& options)
{
    const Eigen::Index N = T.values.rows();
    if (N != T.values.cols() || N == 0) {
        throw Error(ErrorCode::InvalidArgument, "decompose needs a nonempty square matrix");
    }
    if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1)");
    }
    if (options.rank_override && (*options.rank_override < 0 || *options.rank_override > N)) {
        throw Error(ErrorCode::InvalidArgument, "rank override outside [0, N]");
    }

    SpectralDecomposition dec{T.index_set, {}, {}, 0, options.rel_tol, 0.0, true, 0.0, {}};

    // (f(l-k)) = conj(A)^T D A has kernel ker A, so its right vectors are
    // coefficient vectors of polynomials vanishing on the parameters
    const Matrix transposed = T.kind == MatrixKind::Toeplitz ? Matrix(T.values.transpose()) : Matrix();
    const Matrix& factored = T.kind == MatrixKind::Toeplitz ? transposed : T.values;

    DecomposeMethod method = options.method;
    if (method == DecomposeMethod::Auto) {
        method = static_cast<std::size_t>(N) <= options.auto_full_limit ? DecomposeMethod::FullSvd
                                                                        : DecomposeMethod::RankRevealing;
    }
    if (method == DecomposeMethod::FullSvd) {
        Eigen::BDCSVD<Matrix> svd(factored, Eigen::ComputeFullV);
        dec.singular_values = svd.singularValues();
        dec.right_vectors = svd.matrixV();
    } else {
        const int min_steps = options.rank_override ? std::min<int>(*options.rank_override + 1, static_cast<int>(N)) : 0;
        TruncatedFactor f = rank_revealing(factored, options.rel_tol, min_steps);
        dec.singular_values = std::move(f.sigma);
        dec.right_vectors = std::move(f.right_vectors);
        dec.complete = f.complete;
        dec.residual_bound = f.residual;
    }

    dec.rank = options.rank_override ? *options.rank_override : threshold_rank(dec.singular_values, options.rel_tol);
    dec.spectral_gap = gap_at(dec.singular_values, dec.rank, N, dec.residual_bound);
    if (!options.rank_override && dec.rank > 0 && dec.spectral_gap < kGapWarning) {
        dec.warnings.push_back({WarningCode::NoSpectralGap,
                                "sigma_" + std::to_string(dec.rank) + "/sigma_" + std::to_string(dec.rank + 1)
                                    + " = " + std::to_string(dec.spectral_gap)});
    }
    return dec;
}

PolynomialBasis kernel_basis(const SpectralDecomposition& dec)
{
    const Eigen::Index N = dec.right_vectors.cols();
    if (dec.rank >= N) {
        throw Error(ErrorCode::EmptyKernel, "numerical rank equals N = " + std::to_string(N));
    }
    return PolynomialBasis{BasisRole::Kernel, dec.index_set, dec.right_vectors.rightCols(N - dec.rank),
                           Matrix(dec.right_vectors.leftCols(dec.rank))};
}

PolynomialBasis signal_basis(const SpectralDecomposition& dec)
{
    const Eigen::Index N = dec.right_vectors.cols();
    return PolynomialBasis{BasisRole::Signal, dec.index_set, dec.right_vectors.leftCols(dec.rank),
                           Matrix(dec.right_vectors.rightCols(N - dec.rank))};
}

std::pair<Matrix, Matrix> orthonormal_split(const Matrix& B)
{
    const Eigen::Index N = B.rows();
    const Eigen::Index r = B.cols();
    if (r == 0) {
        return {Matrix(N, 0), Matrix::Identity(N, N)};
    }
    Eigen::HouseholderQR<Matrix> qr(B);
    Matrix Q = qr.householderQ();
    return {Q.leftCols(r), Q.rightCols(N - r)};
}

Matrix complement_of(const PolynomialBasis& basis)
{
    if (basis.complement) {
        return *basis.complement;
    }
    return orthonormal_split(basis.vectors).second;
}

std::pair<PolynomialBasis, PolynomialBasis> unweighted_bases(const SpectralDecomposition& weighted,
                                                             const RealVector& w)
{
    const Eigen::Index N = weighted.right_vectors.rows();
    if (w.size() != N || (w.array() <= 0.0).any()) {
        throw Error(ErrorCode::InvalidArgument, "weights must be positive and match the matrix size");
    }
    // ker(WTW) = W^{-1} ker T, hence range(T^H) = W^{-1} range((WTW)^H)
    const Matrix scaled = w.cwiseInverse().asDiagonal() * weighted.right_vectors.leftCols(weighted.rank);
    auto [signal, kernel] = orthonormal_split(scaled);
    PolynomialBasis kernel_part{BasisRole::Kernel, weighted.index_set, kernel, signal};
    PolynomialBasis signal_part{BasisRole::Signal, weighted.index_set, signal, kernel};
    return {std::move(kernel_part), std::move(signal_part)};
}

double condition_bound(int d, int n, double q, double fmax, double fmin)
{
    if (!(fmin > 0.0) || fmax < fmin) {
        throw Error(ErrorCode::InvalidCoefficients, "bound needs fmax >= fmin > 0");
    }
    if (!(q > 0.0) || d < 1 || n < 1) {
        throw Error(ErrorCode::InvalidArgument, "bound needs d, n >= 1 and q > 0");
    }
    const double a = std::pow(static_cast<double>(n) * q, d + 1);
    const double b = std::pow(2.0 * d, d + 1);
    if (a <= b) {
        return std::numeric_limits<double>::infinity();
    }
    return (a + b) / (a - b) * (fmax / fmin);
}

double empirical_condition(const Matrix& T, const RealVector& w, int rank)
{
    if (rank < 1 || rank > T.rows()) {
        throw Error(ErrorCode::InvalidArgument, "rank must lie in [1, N]");
    }
    if ((w.array() <= 0.0).any()) {
        throw Error(ErrorCode::InvalidArgument, "weights must be strictly positive");
    }
    Eigen::BDCSVD<Matrix> svd(apply_weights(T, w));
    const RealVector& sigma = svd.singularValues();
    const double tail = sigma(rank - 1);
    if (tail < 1e-300) {
        throw Error(ErrorCode::RankDeficient, "sigma_" + std::to_string(rank) + " vanishes");
    }
    return sigma(0) / tail;
}

} // namespace prony
