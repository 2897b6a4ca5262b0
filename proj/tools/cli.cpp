#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "prony/io.hpp"
#include "prony/parallel.hpp"
#include "prony/recover.hpp"
#include "prony/structure.hpp"

namespace prony::cli {

namespace {

using io::json;

struct RunConfig {
    std::string preset;
    std::string model_path;
    std::string moments_path;
    std::string input_path;
    std::string output_path;
    std::string truth_path;
    std::string estimate_path;
    std::string matrix_path;
    std::string law = "random-phase";
    std::string root_method = "auto";
    int d = 2;
    int M = 4;
    double q = 0.2;
    std::uint64_t seed = 1;
    std::optional<int> n;
    std::optional<int> rank;
    std::optional<int> grid;
    std::optional<double> dedup;
    std::optional<double> bound_q;
    double bound_ratio = 1.0;
    double rel_tol = 1e-10;
    double tol = 1e-6;
    bool weights = false;
};

int exit_code_for(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::IncompleteGrid:
    case ErrorCode::InvalidArgument:
        return ConfigError;
    default:
        return ReconstructionFailed;
    }
}

ExponentialSum preset_model(const std::string& name, int& n)
{
    if (name == "example-1d") {
        n = 30;
        return ExponentialSum(1, {{1.0, TorusPoint{{0.12}}},
                                  {1.0, TorusPoint{{1.0 / std::numbers::pi}}},
                                  {1.0, TorusPoint{{std::exp(-0.5)}}}});
    }
    if (name == "example-2d") {
        n = 2;
        return ExponentialSum(2, {{1.0, TorusPoint{{0.0, 0.0}}}, {1.0, TorusPoint{{0.5, 0.5}}}});
    }
    if (name == "example-3d") {
        n = 1;
        return ExponentialSum(3, {{1.0, TorusPoint{{0.1, 0.3, 0.25}}}, {1.0, TorusPoint{{0.7, 0.8, 0.9}}}});
    }
    throw Error(ErrorCode::InvalidArgument, "unknown preset " + name);
}

DecomposeOptions decompose_options(const RunConfig& cfg)
{
    DecomposeOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.rank_override = cfg.rank;
    return opt;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file || !(file << text)) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
}

int cmd_generate(const RunConfig& cfg, std::ostream& out)
{
    int n = 0;
    std::optional<ExponentialSum> model;
    if (!cfg.preset.empty()) {
        model.emplace(preset_model(cfg.preset, n));
    } else {
        const CoeffLaw law = cfg.law == "positive" ? CoeffLaw::Positive : CoeffLaw::RandomPhase;
        model.emplace(random_separated_model(cfg.d, cfg.M, cfg.q, law, cfg.seed));
        n = recommended_order(cfg.M, cfg.q, cfg.d);
    }
    if (cfg.n) {
        n = *cfg.n;
    }
    io::write_json_file(cfg.model_path, io::to_json(*model));
    io::write_json_file(cfg.moments_path, io::to_json(sample_moments(*model, n)));
    out << "generated d=" << model->dimension() << " M=" << model->size() << " n=" << n << '\n';
    return Ok;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out)
{
    const MomentGrid grid = io::grid_from_json(io::read_json_file(cfg.input_path));
    ReconstructOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.rank_override = cfg.rank;
    opt.grid_per_dim = cfg.grid;
    opt.dedup_radius = cfg.dedup;
    opt.weights = cfg.weights;
    opt.root_method = cfg.root_method == "grid"        ? RootMethod::Grid
                      : cfg.root_method == "companion" ? RootMethod::Companion
                                                       : RootMethod::Auto;
    const ReconstructionResult result = prony_reconstruct(grid, opt);
    io::write_json_file(cfg.output_path, io::to_json(result));
    out << "rank " << result.rank << ", residual " << result.residual << ", warnings " << result.warnings.size()
        << '\n';
    return Ok;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out)
{
    const MomentGrid grid = io::grid_from_json(io::read_json_file(cfg.input_path));
    const MomentMatrix T = build_toeplitz(grid);
    const DecomposeOptions opt = decompose_options(cfg);
    Matrix signal;
    if (cfg.weights) {
        const RealVector w = triangular_weights(grid.dimension(), grid.order());
        const auto dec = decompose(MomentMatrix{T.kind, T.index_set, apply_weights(T.values, w)}, opt);
        signal = unweighted_bases(dec, w).second.vectors;
    } else {
        signal = signal_basis(decompose(T, opt)).vectors;
    }
    const EnergyField field(T.index_set, std::move(signal));
    const int g = cfg.grid.value_or(4 * grid.order() + 1);
    std::ostringstream csv;
    io::write_certificate_csv(csv, grid.dimension(), field.on_grid(g));
    write_text(cfg.output_path, csv.str(), out);
    return Ok;
}

json finite_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out)
{
    const MomentGrid grid = io::grid_from_json(io::read_json_file(cfg.input_path));
    const MomentMatrix T = build_toeplitz(grid);
    if (!cfg.matrix_path.empty()) {
        std::ofstream file(cfg.matrix_path);
        if (!file) {
            throw Error(ErrorCode::ParseError, "cannot write " + cfg.matrix_path);
        }
        io::write_matrix_csv(file, T);
    }
    const auto dec = decompose(T, decompose_options(cfg));
    const int d = grid.dimension();
    const int n = grid.order();

    json sv = json::array();
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
        sv.push_back(dec.singular_values(i));
    }
    json report{
        {"d", d},
        {"n", n},
        {"N", T.index_set.size()},
        {"rank", dec.rank},
        {"spectral_gap", finite_or_null(dec.spectral_gap)},
        {"singular_values", std::move(sv)},
        {"spectrum_complete", dec.complete},
    };
    if (dec.rank > 0) {
        const RealVector ones = RealVector::Ones(static_cast<Eigen::Index>(T.index_set.size()));
        report["condition"] = {
            {"unweighted", empirical_condition(T.values, ones, dec.rank)},
            {"weighted", empirical_condition(T.values, triangular_weights(d, n), dec.rank)},
        };
    } else {
        report["condition"] = nullptr;
    }

    std::optional<double> q;
    std::optional<double> ratio;
    if (!cfg.truth_path.empty()) {
        const ExponentialSum truth = io::model_from_json(io::read_json_file(cfg.truth_path));
        const auto coeffs = truth.coefficients();
        const bool positive = std::all_of(coeffs.begin(), coeffs.end(),
                                          [](Complex c) { return c.imag() == 0.0 && c.real() > 0.0; });
        if (positive && truth.size() >= 2) {
            q = separation(truth.torus_parameters());
            const auto [lo, hi] = std::minmax_element(coeffs.begin(), coeffs.end(),
                                                      [](Complex a, Complex b) { return a.real() < b.real(); });
            ratio = hi->real() / lo->real();
        }
    } else if (cfg.bound_q) {
        q = cfg.bound_q;
        ratio = cfg.bound_ratio;
    }
    if (q) {
        report["bound"] = {{"q", *q}, {"ratio", *ratio}, {"value", finite_or_null(condition_bound(d, n, *q, *ratio, 1.0))}};
    } else {
        report["bound"] = nullptr;
    }
    write_text(cfg.output_path, report.dump(2) + "\n", out);
    return Ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const ExponentialSum truth = io::model_from_json(io::read_json_file(cfg.truth_path));
    const ExponentialSum estimate = io::estimate_from_json(io::read_json_file(cfg.estimate_path));
    const MatchReport report = match_models(truth, estimate, cfg.tol);
    const bool ok = report.complete() && report.max_coeff_rel_error < cfg.tol;
    out << json{
        {"match", ok},
        {"matched", report.pairs.size()},
        {"unmatched_truth", report.unmatched_truth},
        {"unmatched_estimate", report.unmatched_estimate},
        {"max_parameter_error", report.max_parameter_error},
        {"max_coeff_rel_error", report.max_coeff_rel_error},
    }.dump() << '\n';
    return ok ? Ok : VerifyMismatch;
}

void apply_thread_env()
{
    if (const char* env = std::getenv("PRONY_THREADS")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') {
            set_max_threads(static_cast<unsigned>(value));
        }
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    apply_thread_env();

    RunConfig cfg;
    CLI::App app{"Multivariate Prony reconstruction of sparse exponential sums from moments"};
    app.name("prony");
    app.require_subcommand(1);
    app.set_version_flag("--version", "prony 1.0.0");

    auto add_rank_options = [&cfg](CLI::App* sub) {
        sub->add_option("--rank", cfg.rank, "Use this rank instead of the numerical rank")->check(CLI::NonNegativeNumber);
        sub->add_option("--tol", cfg.rel_tol, "Relative singular value threshold for the numerical rank")
            ->check(CLI::Range(1e-16, 0.5));
    };

    auto* gen = app.add_subcommand("generate", "Write a model and its moment grid");
    gen->add_option("--preset", cfg.preset, "Named instance")
        ->check(CLI::IsMember({"example-1d", "example-2d", "example-3d"}));
    gen->add_option("--d", cfg.d, "Dimension of a random instance")->check(CLI::Range(1, 8));
    gen->add_option("--M", cfg.M, "Number of terms of a random instance")->check(CLI::Range(1, 1000));
    gen->add_option("--q", cfg.q, "Separation of a random instance")->check(CLI::Range(1e-6, 1.0));
    gen->add_option("--seed", cfg.seed, "Random seed");
    gen->add_option("--n", cfg.n, "Moment order (default: preset value or ceil(max(2d/q, M)))")
        ->check(CLI::Range(0, 100000));
    gen->add_option("--law", cfg.law, "Coefficient law")->check(CLI::IsMember({"random-phase", "positive"}));
    gen->add_option("--model", cfg.model_path, "Output model JSON")->required();
    gen->add_option("--moments", cfg.moments_path, "Output moment grid JSON")->required();

    auto* rec = app.add_subcommand("reconstruct", "Recover parameters and coefficients from a moment grid");
    rec->add_option("--in", cfg.input_path, "Moment grid JSON")->required()->check(CLI::ExistingFile);
    rec->add_option("--out", cfg.output_path, "Result JSON")->required();
    add_rank_options(rec);
    rec->add_option("--grid", cfg.grid, "Grid points per dimension for the root scan (default 4n+1)")
        ->check(CLI::PositiveNumber);
    rec->add_option("--dedup", cfg.dedup, "Root clustering radius (default 1/(4n))")->check(CLI::PositiveNumber);
    rec->add_flag("--weights", cfg.weights, "Decompose the triangularly weighted matrix");
    rec->add_option("--roots", cfg.root_method, "Root finder")->check(CLI::IsMember({"auto", "grid", "companion"}));

    auto* cert = app.add_subcommand("certify", "Write the dual certificate and kernel energy on a grid as CSV");
    cert->add_option("--in", cfg.input_path, "Moment grid JSON")->required()->check(CLI::ExistingFile);
    cert->add_option("--out", cfg.output_path, "CSV path, '-' for stdout")->default_val("-");
    add_rank_options(cert);
    cert->add_option("--grid", cfg.grid, "Grid points per dimension (default 4n+1)")->check(CLI::PositiveNumber);
    cert->add_flag("--weights", cfg.weights, "Decompose the triangularly weighted matrix");

    auto* ana = app.add_subcommand("analyze", "Report singular values, rank, conditioning and the condition bound");
    ana->add_option("--in", cfg.input_path, "Moment grid JSON")->required()->check(CLI::ExistingFile);
    ana->add_option("--out", cfg.output_path, "JSON path, '-' for stdout")->default_val("-");
    add_rank_options(ana);
    ana->add_option("--dump-matrix", cfg.matrix_path, "Write the Toeplitz matrix as CSV");
    auto* truth_opt = ana->add_option("--truth", cfg.truth_path, "Model JSON supplying q and fmax/fmin for the bound")
                          ->check(CLI::ExistingFile);
    ana->add_option("--q", cfg.bound_q, "Separation for the bound")->check(CLI::PositiveNumber)->excludes(truth_opt);
    ana->add_option("--ratio", cfg.bound_ratio, "fmax/fmin for the bound")->check(CLI::Range(1.0, 1e300));

    auto* ver = app.add_subcommand("verify", "Match an estimate against a reference model");
    ver->add_option("--truth", cfg.truth_path, "Reference model JSON")->required()->check(CLI::ExistingFile);
    ver->add_option("--estimate", cfg.estimate_path, "Result or model JSON")->required()->check(CLI::ExistingFile);
    ver->add_option("--tol", cfg.tol, "Parameter and relative coefficient tolerance")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : ConfigError;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(cfg, out);
        }
        if (rec->parsed()) {
            return cmd_reconstruct(cfg, out);
        }
        if (cert->parsed()) {
            return cmd_certify(cfg, out);
        }
        if (ana->parsed()) {
            return cmd_analyze(cfg, out);
        }
        return cmd_verify(cfg, out);
    } catch (const Error& e) {
        err << "prony: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "prony: " << e.what() << '\n';
        return ConfigError;
    }
}

} // namespace prony::cli
