#include "prony/variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "prony/parallel.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxHalvings = 30;
const Complex kTwoPiI{0.0, kTwoPi};

// e_k = exp(2 pi i k.t) for every k of the box, coordinate 1 fastest
Vector torus_monomials(const IndexSet& box, std::span<const double> t)
{
    const int n = box.order();
    const std::size_t d = t.size();
    std::vector<std::vector<Complex>> axis(d, std::vector<Complex>(static_cast<std::size_t>(n) + 1));
    for (std::size_t i = 0; i < d; ++i) {
        for (int m = 0; m <= n; ++m) {
            const double x = static_cast<double>(m) * t[i];
            axis[i][static_cast<std::size_t>(m)] = std::polar(1.0, kTwoPi * (x - std::floor(x)));
        }
    }
    Vector e(static_cast<Eigen::Index>(box.size()));
    for (std::size_t a = 0; a < box.size(); ++a) {
        Complex v{1.0, 0.0};
        for (std::size_t i = 0; i < d; ++i) {
            v *= axis[i][static_cast<std::size_t>(box[a][i])];
        }
        e(static_cast<Eigen::Index>(a)) = v;
    }
    return e;
}

void check_point(const IndexSet& box, std::span<const double> t)
{
    if (t.size() != static_cast<std::size_t>(box.dimension())) {
        throw Error(ErrorCode::InvalidArgument, "torus point has the wrong dimension");
    }
}

std::vector<double> wrapped(std::vector<double> t)
{
    for (double& x : t) {
        x = wrap_unit(x);
    }
    return t;
}

bool candidate_less(const TorusCandidate& a, const TorusCandidate& b)
{
    if (a.kernel_energy != b.kernel_energy) {
        return a.kernel_energy < b.kernel_energy;
    }
    return a.t < b.t;
}

} // namespace

PolyValue eval_poly(const IndexSet& box, std::span<const Complex> coeffs, std::span<const double> t,
                    bool with_gradient)
{
    check_point(box, t);
    if (coeffs.size() != box.size()) {
        throw Error(ErrorCode::InvalidArgument, "coefficient vector does not match the index set");
    }
    const Vector e = torus_monomials(box, t);
    PolyValue out{Complex{}, {}};
    const std::size_t d = t.size();
    if (with_gradient) {
        out.gradient.assign(d, Complex{});
    }
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        const Complex term = coeffs[a] * e(static_cast<Eigen::Index>(a));
        out.value += term;
        if (with_gradient) {
            for (std::size_t i = 0; i < d; ++i) {
                out.gradient[i] += static_cast<double>(box[a][i]) * term;
            }
        }
    }
    for (Complex& g : out.gradient) {
        g *= kTwoPiI;
    }
    return out;
}

EnergyValue kernel_energy(const PolynomialBasis& kernel, std::span<const double> t)
{
    const IndexSet& box = kernel.index_set;
    check_point(box, t);
    const std::size_t d = t.size();
    const Vector e = torus_monomials(box, t);
    const Vector values = kernel.vectors.transpose() * e;

    EnergyValue out{values.squaredNorm(), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i < d; ++i) {
        Vector de(e.size());
        for (Eigen::Index a = 0; a < e.size(); ++a) {
            de(a) = kTwoPiI * static_cast<double>(box[static_cast<std::size_t>(a)][i]) * e(a);
        }
        const Vector dvalues = kernel.vectors.transpose() * de;
        out.gradient[i] = 2.0 * (values.conjugate().array() * dvalues.array()).real().sum();
    }
    return out;
}

double certificate(const PolynomialBasis& signal, std::span<const double> t)
{
    const IndexSet& box = signal.index_set;
    check_point(box, t);
    const Vector values = signal.vectors.transpose() * torus_monomials(box, t);
    return values.squaredNorm() / static_cast<double>(box.size());
}

EnergyField::EnergyField(const PolynomialBasis& kernel)
    : EnergyField(kernel.index_set, kernel.role == BasisRole::Kernel ? complement_of(kernel) : kernel.vectors)
{
}

EnergyField::EnergyField(IndexSet box, Matrix signal_vectors) : box_(std::move(box)), signal_(std::move(signal_vectors))
{
    if (box_.kind() != IndexKind::Box || static_cast<std::size_t>(signal_.rows()) != box_.size()) {
        throw Error(ErrorCode::InvalidArgument, "energy field needs vectors over a box index set");
    }
}

EnergyField::Sample EnergyField::evaluate(std::span<const double> t, int order) const
{
    check_point(box_, t);
    const auto d = static_cast<Eigen::Index>(t.size());
    const auto N = static_cast<Eigen::Index>(box_.size());
    const Vector e = torus_monomials(box_, t);

    // columns: e, then d first derivatives, then the upper triangle of second derivatives
    const Eigen::Index cols = 1 + (order >= 1 ? d : 0) + (order >= 2 ? d * (d + 1) / 2 : 0);
    Matrix E(N, cols);
    E.col(0) = e;
    Eigen::Index c = 1;
    if (order >= 1) {
        for (Eigen::Index i = 0; i < d; ++i, ++c) {
            for (Eigen::Index a = 0; a < N; ++a) {
                E(a, c) = kTwoPiI * static_cast<double>(box_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]) * e(a);
            }
        }
    }
    if (order >= 2) {
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = i; j < d; ++j, ++c) {
                for (Eigen::Index a = 0; a < N; ++a) {
                    const auto& k = box_[static_cast<std::size_t>(a)];
                    E(a, c) = -kTwoPi * kTwoPi * static_cast<double>(k[static_cast<std::size_t>(i)])
                              * static_cast<double>(k[static_cast<std::size_t>(j)]) * e(a);
                }
            }
        }
    }
    const Matrix P = signal_.transpose() * E;

    const double power = P.col(0).squaredNorm();
    Sample out{static_cast<double>(N) - power, power / static_cast<double>(N), Eigen::VectorXd::Zero(d),
               Eigen::MatrixXd::Zero(d, d)};
    if (order >= 1) {
        for (Eigen::Index i = 0; i < d; ++i) {
            out.gradient(i) = -2.0 * (P.col(0).conjugate().array() * P.col(1 + i).array()).real().sum();
        }
    }
    if (order >= 2) {
        Eigen::Index h = 1 + d;
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = i; j < d; ++j, ++h) {
                const double v = -2.0 * ((P.col(1 + i).conjugate().array() * P.col(1 + j).array()).real().sum()
                                         + (P.col(0).conjugate().array() * P.col(h).array()).real().sum());
                out.hessian(i, j) = v;
                out.hessian(j, i) = v;
            }
        }
    }
    return out;
}

EnergyField::GridValues EnergyField::on_grid(int per_dim) const
{
    if (per_dim < 2) {
        throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points per dimension");
    }
    const int d = box_.dimension();
    const int n = box_.order();
    const auto g = static_cast<std::size_t>(per_dim);
    const std::size_t side = static_cast<std::size_t>(n) + 1;

    // dft[m * side + k] = exp(2 pi i k m / g), phases reduced in integers
    std::vector<Complex> dft(g * side);
    for (std::size_t m = 0; m < g; ++m) {
        for (std::size_t k = 0; k < side; ++k) {
            const auto r = static_cast<double>((k * m) % g);
            dft[m * side + k] = std::polar(1.0, kTwoPi * r / static_cast<double>(g));
        }
    }

    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= g;
    }
    std::vector<double> power(total, 0.0);

    for (Eigen::Index l = 0; l < signal_.cols(); ++l) {
        std::vector<Complex> data(signal_.col(l).data(), signal_.col(l).data() + signal_.rows());
        std::vector<std::size_t> sizes(static_cast<std::size_t>(d), side);
        for (int axis = 0; axis < d; ++axis) {
            std::size_t stride = 1;
            for (int i = 0; i < axis; ++i) {
                stride *= sizes[static_cast<std::size_t>(i)];
            }
            std::size_t outer = 1;
            for (int i = axis + 1; i < d; ++i) {
                outer *= sizes[static_cast<std::size_t>(i)];
            }
            std::vector<Complex> next(stride * g * outer);
            parallel_for(outer, [&](std::size_t begin, std::size_t end) {
                for (std::size_t o = begin; o < end; ++o) {
                    for (std::size_t m = 0; m < g; ++m) {
                        const Complex* row = &dft[m * side];
                        Complex* dst = &next[stride * (m + g * o)];
                        for (std::size_t k = 0; k < side; ++k) {
                            const Complex* src = &data[stride * (k + side * o)];
                            const Complex w = row[k];
                            for (std::size_t s = 0; s < stride; ++s) {
                                dst[s] += src[s] * w;
                            }
                        }
                    }
                }
            });
            data = std::move(next);
            sizes[static_cast<std::size_t>(axis)] = g;
        }
        for (std::size_t i = 0; i < total; ++i) {
            power[i] += std::norm(data[i]);
        }
    }

    const double N = static_cast<double>(box_.size());
    GridValues out{per_dim, std::vector<double>(total), std::vector<double>(total)};
    for (std::size_t i = 0; i < total; ++i) {
        out.energy[i] = N - power[i];
        out.certificate[i] = power[i] / N;
    }
    return out;
}

std::vector<TorusCandidate> grid_scan(const EnergyField& field, int per_dim)
{
    const auto& box = field.index_set();
    const int d = box.dimension();
    // an empty kernel has no roots to localise
    if (field.kernel_dimension() == 0) {
        return {};
    }
    const EnergyField::GridValues values = field.on_grid(per_dim);
    const auto g = static_cast<std::size_t>(per_dim);
    const std::size_t total = values.energy.size();

    // neighbour offsets in {-1,0,1}^d \ {0}
    std::vector<std::vector<int>> offsets;
    std::size_t combos = 1;
    for (int i = 0; i < d; ++i) {
        combos *= 3;
    }
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<int> off(static_cast<std::size_t>(d));
        std::size_t rest = c;
        bool zero = true;
        for (auto& o : off) {
            o = static_cast<int>(rest % 3) - 1;
            rest /= 3;
            zero = zero && o == 0;
        }
        if (!zero) {
            offsets.push_back(std::move(off));
        }
    }

    std::vector<char> is_min(total, 0);
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> coord(static_cast<std::size_t>(d));
        for (std::size_t idx = begin; idx < end; ++idx) {
            std::size_t rest = idx;
            for (auto& c : coord) {
                c = rest % g;
                rest /= g;
            }
            const double q = values.energy[idx];
            bool minimum = true;
            for (const auto& off : offsets) {
                std::size_t nb = 0;
                for (std::size_t i = coord.size(); i-- > 0;) {
                    const std::size_t ci = (coord[i] + g + static_cast<std::size_t>(off[i] + 1) - 1) % g;
                    nb = nb * g + ci;
                }
                if (nb == idx) {
                    continue;
                }
                const double qn = values.energy[nb];
                if (qn < q || (qn == q && nb < idx)) {
                    minimum = false;
                    break;
                }
            }
            is_min[idx] = minimum ? 1 : 0;
        }
    });

    std::vector<TorusCandidate> out;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (!is_min[idx]) {
            continue;
        }
        TorusCandidate c;
        c.t.resize(static_cast<std::size_t>(d));
        std::size_t rest = idx;
        for (auto& ti : c.t) {
            ti = static_cast<double>(rest % g) / static_cast<double>(g);
            rest /= g;
        }
        c.kernel_energy = std::max(0.0, values.energy[idx]);
        c.certificate = values.certificate[idx];
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), candidate_less);
    return out;
}

std::vector<TorusCandidate> grid_scan(const PolynomialBasis& kernel, int per_dim)
{
    if (kernel.size() == 0) {
        return {};
    }
    return grid_scan(EnergyField(kernel), per_dim);
}

TorusCandidate refine(const TorusCandidate& candidate, const EnergyField& field, const RefineOptions& options)
{
    const auto& box = field.index_set();
    const double N = field.basis_size();
    const double n = std::max(1, box.order());
    // q is a difference of O(N) quantities; changes below this are noise
    const double allowance = 64.0 * std::numeric_limits<double>::epsilon() * N;
    const double max_step = 0.25 / n;

    std::vector<double> t = wrapped(candidate.t);
    EnergyField::Sample sample = field.evaluate(t, 2);
    bool converged = false;
    int iterations = 0;

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Eigen::VectorXd& grad = sample.gradient;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sample.hessian);
        const Eigen::VectorXd& lambda = eig.eigenvalues();
        const double top = lambda.cwiseAbs().maxCoeff();
        Eigen::VectorXd step;
        if (lambda.minCoeff() > 1e-12 * top) {
            step = -sample.hessian.llt().solve(grad);
        } else {
            const double scale = top > 0.0 ? top : N * kTwoPi * kTwoPi * n * n;
            step = -grad / scale;
        }
        const double len = step.cwiseAbs().maxCoeff();
        if (!(len >= options.step_tol)) {
            converged = true;
            break;
        }
        if (len > max_step) {
            step *= max_step / len;
        }

        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(t.size());
        EnergyField::Sample next;
        for (int h = 0; h <= kMaxHalvings; ++h, alpha *= 0.5) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                trial[i] = wrap_unit(t[i] + alpha * step(static_cast<Eigen::Index>(i)));
            }
            next = field.evaluate(trial, 0);
            if (next.energy <= sample.energy + allowance) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // no decrease above round-off in any direction we tried
            converged = true;
            break;
        }
        t = trial;
        sample = field.evaluate(t, 2);
        ++iterations;
        if (alpha * std::min(len, max_step) < options.step_tol) {
            converged = true;
            break;
        }
    }

    TorusCandidate out;
    out.t = t;
    out.kernel_energy = std::max(0.0, sample.energy);
    out.certificate = sample.certificate;
    out.refined = converged;
    out.iterations = iterations;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sample.hessian, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    out.curvature_ratio = top > 0.0 ? std::max(0.0, eig.eigenvalues().minCoeff()) / top : 0.0;
    return out;
}

TorusCandidate refine(const TorusCandidate& candidate, const PolynomialBasis& kernel, const RefineOptions& options)
{
    return refine(candidate, EnergyField(kernel), options);
}

ExtractionResult extract_parameters(const PolynomialBasis& kernel, int M, const ExtractOptions& options)
{
    if (kernel.role != BasisRole::Kernel) {
        throw Error(ErrorCode::InvalidArgument, "extract_parameters needs a kernel basis");
    }
    if (kernel.size() == 0) {
        throw Error(ErrorCode::TooFewRoots, "empty kernel, no polynomial constrains the parameters");
    }
    return extract_parameters(EnergyField(kernel), M, options);
}

ExtractionResult extract_parameters(const EnergyField& field, int M, const ExtractOptions& options)
{
    if (M < 1) {
        throw Error(ErrorCode::InvalidArgument, "need M >= 1 roots");
    }
    const auto& box = field.index_set();
    const int n = std::max(1, box.order());
    const double N = field.basis_size();
    const int per_dim = options.grid_per_dim.value_or(4 * n + 1);
    const double radius = options.dedup_radius.value_or(1.0 / (4.0 * n));
    const double cap = options.energy_cap.value_or(1e-8 * N);
    const std::size_t limit = options.max_refine > 0 ? static_cast<std::size_t>(options.max_refine)
                                                     : static_cast<std::size_t>(std::max(8 * M, 64));

    std::vector<TorusCandidate> candidates = grid_scan(field, per_dim);
    if (candidates.size() > limit) {
        candidates.resize(limit);
    }
    std::vector<TorusCandidate> refined(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            refined[i] = refine(candidates[i], field, options.refine);
        }
    });
    std::stable_sort(refined.begin(), refined.end(), candidate_less);

    ExtractionResult result;
    for (auto& c : refined) {
        const bool duplicate = std::any_of(result.clusters.begin(), result.clusters.end(), [&](const TorusCandidate& k) {
            return torus_distance(k.t, c.t) <= radius;
        });
        if (!duplicate) {
            result.clusters.push_back(std::move(c));
        }
    }

    std::vector<const TorusCandidate*> passing;
    std::size_t strict = 0;
    for (const auto& c : result.clusters) {
        if (c.kernel_energy <= cap) {
            passing.push_back(&c);
        }
        if (c.kernel_energy <= 0.1 * cap) {
            ++strict;
        }
    }
    if (passing.size() < static_cast<std::size_t>(M)) {
        throw Error(ErrorCode::TooFewRoots, "found " + std::to_string(passing.size()) + " torus roots below the energy cap "
                                                + std::to_string(cap) + ", expected " + std::to_string(M));
    }
    if (strict > static_cast<std::size_t>(M)) {
        result.warnings.push_back({WarningCode::SpuriousRoots, std::to_string(strict) + " isolated minima with energy <= "
                                                                   + std::to_string(0.1 * cap) + " for M = "
                                                                   + std::to_string(M)});
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(M); ++j) {
        result.roots.push_back(*passing[j]);
    }

    std::size_t flat = 0;
    std::size_t stuck = 0;
    for (const auto& r : result.roots) {
        if (field.dimension() > 1 && r.curvature_ratio < options.isolation_tol) {
            ++flat;
        }
        if (!r.refined) {
            ++stuck;
        }
    }
    if (flat > 0) {
        const std::string msg = std::to_string(flat) + " root(s) lie on a curve of zeros (curvature ratio below "
                                + std::to_string(options.isolation_tol) + ")";
        result.warnings.push_back({WarningCode::NonIsolatedRoots, msg});
        if (!has_warning(result.warnings, WarningCode::SpuriousRoots)) {
            result.warnings.push_back({WarningCode::SpuriousRoots, "zero set is not finite: " + msg});
        }
    }
    if (stuck > 0) {
        result.warnings.push_back({WarningCode::DidNotConverge,
                                   std::to_string(stuck) + " root(s) hit the Newton iteration limit"});
    }
    return result;
}

std::vector<Complex> companion_roots_1d(std::span<const Complex> coeffs)
{
    std::size_t len = coeffs.size();
    while (len > 0 && coeffs[len - 1] == Complex{}) {
        --len;
    }
    if (len < 2) {
        throw Error(ErrorCode::DegenerateDegree, "polynomial is constant");
    }
    const auto m = static_cast<Eigen::Index>(len - 1);
    const Complex lead = coeffs[len - 1];
    Matrix C = Matrix::Zero(m, m);
    for (Eigen::Index i = 1; i < m; ++i) {
        C(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        C(i, m - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    }
    Eigen::ComplexEigenSolver<Matrix> solver(C, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "companion eigenvalue iteration failed");
    }
    std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        const double pa = wrap_unit(std::arg(a) / kTwoPi);
        const double pb = wrap_unit(std::arg(b) / kTwoPi);
        return pa != pb ? pa < pb : std::abs(a) < std::abs(b);
    });
    return roots;
}

std::vector<Complex> minimal_kernel_polynomial_1d(const PolynomialBasis& kernel, int M)
{
    const IndexSet& box = kernel.index_set;
    const int n = box.order();
    if (box.dimension() != 1 || kernel.role != BasisRole::Kernel) {
        throw Error(ErrorCode::InvalidArgument, "minimal kernel polynomial needs a univariate kernel basis");
    }
    if (M < 1 || M > n || kernel.size() == 0) {
        throw Error(ErrorCode::InvalidArgument, "degree must lie in [1, n] with a nonempty kernel");
    }
    // kernel elements whose coefficients of degree > M vanish
    const Matrix tail = kernel.vectors.bottomRows(n - M);
    Vector combo;
    if (tail.rows() == 0) {
        combo = Vector::Zero(kernel.vectors.cols());
        combo(0) = 1.0;
    } else {
        Eigen::JacobiSVD<Matrix> svd(tail, Eigen::ComputeFullV);
        combo = svd.matrixV().col(svd.matrixV().cols() - 1);
    }
    const Vector p = kernel.vectors * combo;
    return {p.data(), p.data() + M + 1};
}

} // namespace prony
