#ifndef PRONY_RECOVER_HPP
#define PRONY_RECOVER_HPP

#include <optional>
#include <vector>

#include "prony/kernel.hpp"
#include "prony/model.hpp"
#include "prony/variety.hpp"

namespace prony {

struct CoefficientFit {
    std::vector<Complex> coefficients;
    /// ||V c - f|| / ||f|| over the full grid (absolute when f = 0).
    double residual = 0.0;
    /// sigma_max / sigma_min of the system matrix.
    double condition = 0.0;
};

/// Least-squares coefficients on all of {-n..n}^d. Throws
/// IllConditionedSystem when the system condition exceeds 1e12.
CoefficientFit recover_coefficients(const std::vector<std::vector<double>>& params, const MomentGrid& grid);

enum class RootMethod {
    /// Companion for d = 1, Grid otherwise.
    Auto,
    Grid,
    Companion,
};

struct ReconstructOptions {
    double rel_tol = 1e-10;
    std::optional<int> rank_override;
    std::optional<int> grid_per_dim;
    std::optional<double> dedup_radius;
    bool weights = false;
    RootMethod root_method = RootMethod::Auto;
    DecomposeMethod decompose_method = DecomposeMethod::Auto;
};

struct ReconstructionResult {
    int dimension = 0;
    int order = 0;
    /// Empty when the numerical rank is zero.
    std::optional<ExponentialSum> model;
    RealVector singular_values;
    bool spectrum_complete = true;
    int rank = 0;
    double spectral_gap = 0.0;
    std::vector<double> root_energies;
    double residual = 0.0;
    std::vector<Warning> warnings;
};

/// Toeplitz assembly, kernel, torus roots, coefficients.
ReconstructionResult prony_reconstruct(const MomentGrid& grid, const ReconstructOptions& options = {});

struct MatchedPair {
    std::size_t truth;
    std::size_t estimate;
    double parameter_error;
    double coeff_abs_error;
    double coeff_rel_error;
};

struct MatchReport {
    std::vector<MatchedPair> pairs;
    std::vector<std::size_t> unmatched_truth;
    std::vector<std::size_t> unmatched_estimate;
    double max_parameter_error = 0.0;
    double max_coeff_abs_error = 0.0;
    double max_coeff_rel_error = 0.0;

    bool complete() const { return unmatched_truth.empty() && unmatched_estimate.empty(); }
};

/// Assignment minimising the total wrap-around l-inf parameter error
/// (exhaustive up to 8 terms, greedy beyond). Pairs farther apart than tol
/// are reported as unmatched.
MatchReport match_models(const ExponentialSum& truth, const ExponentialSum& estimate, double tol);

/// ceil(max(2d/q, M)).
int recommended_order(int M, double q, int d);

} // namespace prony

#endif
