#ifndef PRONY_VARIETY_HPP
#define PRONY_VARIETY_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "prony/error.hpp"
#include "prony/kernel.hpp"

namespace prony {

struct PolyValue {
    Complex value;
    /// d/dt_i, empty unless requested.
    std::vector<Complex> gradient;
};

/// p(t) = sum_k c_k exp(2 pi i k.t) over a box index set, optionally with
/// the gradient 2 pi i sum_k k_i c_k exp(2 pi i k.t).
PolyValue eval_poly(const IndexSet& box, std::span<const Complex> coeffs, std::span<const double> t,
                    bool with_gradient = true);

struct EnergyValue {
    double value;
    std::vector<double> gradient;
};

/// q(t) = sum_l |p_l(t)|^2 over a kernel basis, evaluated term by term.
EnergyValue kernel_energy(const PolynomialBasis& kernel, std::span<const double> t);

/// p(t) = (1/N) sum_l |p_l(t)|^2 over a signal basis.
double certificate(const PolynomialBasis& signal, std::span<const double> t);

/// Kernel energy evaluated through the signal complement,
/// q(t) = N - sum_{signal} |s_l(t)|^2, which costs O(M N) per point instead
/// of O(N^2). Supplies gradient and Hessian for refinement and a separable
/// DFT for uniform grids.
class EnergyField {
public:
    explicit EnergyField(const PolynomialBasis& kernel);
    EnergyField(IndexSet box, Matrix signal_vectors);

    struct Sample {
        double energy;
        double certificate;
        Eigen::VectorXd gradient;
        Eigen::MatrixXd hessian;
    };

    /// order: 0 = value, 1 = + gradient, 2 = + Hessian.
    Sample evaluate(std::span<const double> t, int order = 2) const;

    struct GridValues {
        int per_dim;
        std::vector<double> energy;
        std::vector<double> certificate;
    };

    /// Values on (i_1/g, ..., i_d/g), coordinate 1 fastest.
    GridValues on_grid(int per_dim) const;

    const IndexSet& index_set() const noexcept { return box_; }
    int dimension() const noexcept { return box_.dimension(); }
    double basis_size() const noexcept { return static_cast<double>(box_.size()); }
    std::size_t kernel_dimension() const noexcept { return box_.size() - static_cast<std::size_t>(signal_.cols()); }
    const Matrix& signal_vectors() const noexcept { return signal_; }

private:
    IndexSet box_;
    Matrix signal_;
};

struct TorusCandidate {
    std::vector<double> t;
    double kernel_energy = 0.0;
    double certificate = 0.0;
    bool refined = false;
    int iterations = 0;
    /// Smallest / largest Hessian eigenvalue of q at t (0 on a curve of zeros).
    double curvature_ratio = 0.0;
};

/// Strict local minima of q on the uniform grid (wrap-around neighbours,
/// ties broken by grid position), sorted by ascending energy.
std::vector<TorusCandidate> grid_scan(const EnergyField& field, int per_dim);
std::vector<TorusCandidate> grid_scan(const PolynomialBasis& kernel, int per_dim);

struct RefineOptions {
    int max_iter = 50;
    double step_tol = 1e-13;
};

/// Damped Newton on q over the torus, gradient descent where the Hessian
/// is not positive definite. `refined` is false when max_iter was hit.
TorusCandidate refine(const TorusCandidate& candidate, const EnergyField& field,
                      const RefineOptions& options = {});
TorusCandidate refine(const TorusCandidate& candidate, const PolynomialBasis& kernel,
                      const RefineOptions& options = {});

struct ExtractOptions {
    std::optional<int> grid_per_dim;   // default 4n + 1
    std::optional<double> dedup_radius; // default 1 / (4n)
    std::optional<double> energy_cap;   // default 1e-8 N
    /// Candidates refined, lowest grid energy first; 0 means max(8M, 64).
    int max_refine = 0;
    /// curvature_ratio below this marks a root as non-isolated.
    double isolation_tol = 1e-6;
    RefineOptions refine;
};

struct ExtractionResult {
    std::vector<TorusCandidate> roots;
    /// All refined cluster representatives, ascending energy.
    std::vector<TorusCandidate> clusters;
    std::vector<Warning> warnings;
};

/// Scan, refine, cluster and return the M lowest-energy torus roots of the
/// kernel. Throws TooFewRoots when fewer than M clusters pass the cap.
ExtractionResult extract_parameters(const PolynomialBasis& kernel, int M, const ExtractOptions& options = {});
ExtractionResult extract_parameters(const EnergyField& field, int M, const ExtractOptions& options = {});

/// Roots of sum_k c_k Z^k (ascending coefficients) as eigenvalues of the
/// companion matrix. Exactly-zero leading coefficients are trimmed.
std::vector<Complex> companion_roots_1d(std::span<const Complex> coeffs);

/// Coefficients (degree M, ascending) of the lowest-degree element of a
/// univariate kernel.
std::vector<Complex> minimal_kernel_polynomial_1d(const PolynomialBasis& kernel, int M);

} // namespace prony

#endif
