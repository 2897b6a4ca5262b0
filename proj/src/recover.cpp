#include "prony/recover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "prony/structure.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxSystemCondition = 1e12;
constexpr std::size_t kExhaustiveLimit = 8;

double reduced_phase(std::span<const int> k, std::span<const double> t)
{
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double x = static_cast<double>(k[i]) * t[i];
        phase += x - std::floor(x);
    }
    phase -= std::floor(phase);
    return phase >= 0.5 ? phase - 1.0 : phase;
}

// best injection of `small` indices into `large` indices under cost(small, large)
template <class Cost>
std::vector<std::size_t> exhaustive_assignment(std::size_t small, std::size_t large, Cost cost)
{
    std::vector<std::size_t> current(small), best(small);
    std::vector<char> used(large, 0);
    double best_total = std::numeric_limits<double>::infinity();
    auto search = [&](auto&& self, std::size_t i, double total) -> void {
        if (total >= best_total) {
            return;
        }
        if (i == small) {
            best_total = total;
            best = current;
            return;
        }
        for (std::size_t j = 0; j < large; ++j) {
            if (used[j]) {
                continue;
            }
            used[j] = 1;
            current[i] = j;
            self(self, i + 1, total + cost(i, j));
            used[j] = 0;
        }
    };
    search(search, 0, 0.0);
    return best;
}

template <class Cost>
std::vector<std::size_t> greedy_assignment(std::size_t small, std::size_t large, Cost cost)
{
    std::vector<std::size_t> out(small, 0);
    std::vector<char> row_done(small, 0), col_done(large, 0);
    for (std::size_t step = 0; step < small; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < small; ++i) {
            if (row_done[i]) {
                continue;
            }
            for (std::size_t j = 0; j < large; ++j) {
                if (!col_done[j] && cost(i, j) < best) {
                    best = cost(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        row_done[bi] = 1;
        col_done[bj] = 1;
        out[bi] = bj;
    }
    return out;
}

} // namespace

CoefficientFit recover_coefficients(const std::vector<std::vector<double>>& params, const MomentGrid& grid)
{
    if (params.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no parameters to fit");
    }
    const auto rows = static_cast<Eigen::Index>(grid.size());
    const auto M = static_cast<Eigen::Index>(params.size());
    for (const auto& t : params) {
        if (t.size() != static_cast<std::size_t>(grid.dimension())) {
            throw Error(ErrorCode::InvalidArgument, "parameter dimension does not match the grid");
        }
    }
    Matrix V(rows, M);
    Vector f(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const MultiIndex k = grid.index_at(static_cast<std::size_t>(r));
        for (Eigen::Index j = 0; j < M; ++j) {
            V(r, j) = std::polar(1.0, kTwoPi * reduced_phase(k, params[static_cast<std::size_t>(j)]));
        }
        f(r) = grid.values()[static_cast<std::size_t>(r)];
    }

    Eigen::BDCSVD<Matrix> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    const double smallest = sigma(M - 1);
    const double condition = smallest > 0.0 ? sigma(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxSystemCondition)) {
        throw Error(ErrorCode::IllConditionedSystem,
                    "coefficient system condition " + std::to_string(condition) + " exceeds 1e12");
    }
    const Vector c = svd.solve(f);
    const double fnorm = f.norm();
    const double misfit = (V * c - f).norm();

    CoefficientFit fit;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    fit.residual = fnorm > 0.0 ? misfit / fnorm : misfit;
    fit.condition = condition;
    return fit;
}

ReconstructionResult prony_reconstruct(const MomentGrid& grid, const ReconstructOptions& options)
{
    if (grid.order() < 1) {
        throw Error(ErrorCode::InvalidArgument, "reconstruction needs moment order n >= 1");
    }
    ReconstructionResult result;
    result.dimension = grid.dimension();
    result.order = grid.order();

    const MomentMatrix T = build_toeplitz(grid);
    DecomposeOptions dopt;
    dopt.rel_tol = options.rel_tol;
    dopt.rank_override = options.rank_override;
    dopt.method = options.decompose_method;

    RealVector weights;
    if (options.weights) {
        weights = triangular_weights(grid.dimension(), grid.order());
    }
    const SpectralDecomposition dec =
        options.weights ? decompose(MomentMatrix{T.kind, T.index_set, apply_weights(T.values, weights)}, dopt)
                        : decompose(T, dopt);
    result.singular_values = dec.singular_values;
    result.spectrum_complete = dec.complete;
    result.rank = dec.rank;
    result.spectral_gap = dec.spectral_gap;
    result.warnings = dec.warnings;

    const auto f = grid.values();
    if (dec.rank == 0) {
        result.warnings.push_back({WarningCode::ZeroRank, "numerical rank is zero, returning the empty model"});
        const bool nonzero = std::any_of(f.begin(), f.end(), [](Complex v) { return v != Complex{}; });
        result.residual = nonzero ? 1.0 : 0.0;
        return result;
    }

    const std::string context = "rank " + std::to_string(dec.rank) + ", n = " + std::to_string(grid.order()) + ": ";
    try {
        PolynomialBasis kernel = options.weights ? unweighted_bases(dec, weights).first : kernel_basis(dec);
        const EnergyField field(kernel);

        RootMethod method = options.root_method;
        if (method == RootMethod::Auto) {
            method = grid.dimension() == 1 ? RootMethod::Companion : RootMethod::Grid;
        }

        std::vector<std::vector<double>> params;
        if (method == RootMethod::Companion) {
            if (grid.dimension() != 1) {
                throw Error(ErrorCode::InvalidArgument, "companion roots need d = 1");
            }
            const auto poly = minimal_kernel_polynomial_1d(kernel, dec.rank);
            for (Complex z : companion_roots_1d(poly)) {
                if (std::abs(std::abs(z) - 1.0) > 1e-6) {
                    result.warnings.push_back({WarningCode::OffTorusRoot,
                                               "root modulus " + std::to_string(std::abs(z)) + " projected onto the circle"});
                }
                std::vector<double> t{wrap_unit(std::arg(z) / kTwoPi)};
                result.root_energies.push_back(std::max(0.0, field.evaluate(t, 0).energy));
                params.push_back(std::move(t));
            }
        } else {
            ExtractOptions eopt;
            eopt.grid_per_dim = options.grid_per_dim;
            eopt.dedup_radius = options.dedup_radius;
            ExtractionResult extraction = extract_parameters(field, dec.rank, eopt);
            for (auto& w : extraction.warnings) {
                result.warnings.push_back(std::move(w));
            }
            for (auto& root : extraction.roots) {
                result.root_energies.push_back(root.kernel_energy);
                params.push_back(std::move(root.t));
            }
        }

        const CoefficientFit fit = recover_coefficients(params, grid);
        result.residual = fit.residual;
        std::vector<Term> terms;
        for (std::size_t j = 0; j < params.size(); ++j) {
            terms.push_back(Term{fit.coefficients[j], TorusPoint{params[j]}});
        }
        result.model.emplace(grid.dimension(), std::move(terms));
    } catch (const Error& e) {
        throw Error(e.code(), context + e.detail());
    }
    return result;
}

MatchReport match_models(const ExponentialSum& truth, const ExponentialSum& estimate, double tol)
{
    const auto tp = truth.torus_parameters();
    const auto ep = estimate.torus_parameters();
    const auto tc = truth.coefficients();
    const auto ec = estimate.coefficients();

    const bool truth_small = tp.size() <= ep.size();
    const std::size_t small = truth_small ? tp.size() : ep.size();
    const std::size_t large = truth_small ? ep.size() : tp.size();
    auto cost = [&](std::size_t i, std::size_t j) {
        return truth_small ? torus_distance(tp[i], ep[j]) : torus_distance(tp[j], ep[i]);
    };
    const std::vector<std::size_t> assign = large <= kExhaustiveLimit ? exhaustive_assignment(small, large, cost)
                                                                      : greedy_assignment(small, large, cost);

    MatchReport report;
    std::vector<char> truth_used(tp.size(), 0), est_used(ep.size(), 0);
    for (std::size_t i = 0; i < small; ++i) {
        const std::size_t ti = truth_small ? i : assign[i];
        const std::size_t ei = truth_small ? assign[i] : i;
        const double perr = torus_distance(tp[ti], ep[ei]);
        if (perr > tol) {
            continue;
        }
        const double abs_err = std::abs(ec[ei] - tc[ti]);
        report.pairs.push_back({ti, ei, perr, abs_err, abs_err / std::abs(tc[ti])});
        truth_used[ti] = 1;
        est_used[ei] = 1;
    }
    std::sort(report.pairs.begin(), report.pairs.end(),
              [](const MatchedPair& a, const MatchedPair& b) { return a.truth < b.truth; });
    for (std::size_t i = 0; i < tp.size(); ++i) {
        if (!truth_used[i]) {
            report.unmatched_truth.push_back(i);
        }
    }
    for (std::size_t i = 0; i < ep.size(); ++i) {
        if (!est_used[i]) {
            report.unmatched_estimate.push_back(i);
        }
    }
    for (const auto& p : report.pairs) {
        report.max_parameter_error = std::max(report.max_parameter_error, p.parameter_error);
        report.max_coeff_abs_error = std::max(report.max_coeff_abs_error, p.coeff_abs_error);
        report.max_coeff_rel_error = std::max(report.max_coeff_rel_error, p.coeff_rel_error);
    }
    return report;
}

int recommended_order(int M, double q, int d)
{
    if (M < 1 || !(q > 0.0) || d < 1) {
        throw Error(ErrorCode::InvalidArgument, "recommended order needs M, d >= 1 and q > 0");
    }
    const double bound = std::max(2.0 * d / q, static_cast<double>(M));
    // absorb round-off such as 4 / 0.1 = 40.000000000000004
    return static_cast<int>(std::ceil(bound - 1e-9));
}

} // namespace prony
