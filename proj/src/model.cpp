#include "prony/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "prony/error.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDraws = 10000;
constexpr int kRestartAfter = 1000;

Complex ipow(Complex z, int k)
{
    if (k < 0) {
        z = 1.0 / z;
        k = -k;
    }
    Complex result{1.0, 0.0};
    while (k > 0) {
        if (k & 1) {
            result *= z;
        }
        z *= z;
        k >>= 1;
    }
    return result;
}

// fractional part of k.t in [-1/2, 1/2)
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

// exp(2 pi i phase), exact at multiples of a quarter turn
Complex unit_phasor(double phase)
{
    if (phase == 0.0) {
        return {1.0, 0.0};
    }
    if (phase == -0.5) {
        return {-1.0, 0.0};
    }
    if (phase == 0.25) {
        return {0.0, 1.0};
    }
    if (phase == -0.25) {
        return {0.0, -1.0};
    }
    return std::polar(1.0, kTwoPi * phase);
}

} // namespace

std::size_t dimension_of(const ParameterPoint& p)
{
    return std::visit([](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TorusPoint>) {
            return v.t.size();
        } else {
            return v.z.size();
        }
    }, p);
}

bool is_torus(const ParameterPoint& p) { return std::holds_alternative<TorusPoint>(p); }

std::vector<Complex> to_complex(const ParameterPoint& p)
{
    if (const auto* tp = std::get_if<TorusPoint>(&p)) {
        std::vector<Complex> z;
        z.reserve(tp->t.size());
        for (double t : tp->t) {
            z.push_back(std::polar(1.0, kTwoPi * t));
        }
        return z;
    }
    return std::get<ComplexPoint>(p).z;
}

ExponentialSum::ExponentialSum(int d, std::vector<Term> terms) : d_(d), terms_(std::move(terms))
{
    if (d_ < 1) {
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    }
    if (terms_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "an exponential sum needs at least one term");
    }
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        const Term& term = terms_[j];
        if (!(std::abs(term.coeff) > 0.0) || !std::isfinite(std::abs(term.coeff))) {
            throw Error(ErrorCode::InvalidArgument, "coefficient " + std::to_string(j) + " is zero or not finite");
        }
        if (dimension_of(term.param) != static_cast<std::size_t>(d_)) {
            throw Error(ErrorCode::InvalidArgument, "parameter " + std::to_string(j) + " has the wrong dimension");
        }
        if (const auto* tp = std::get_if<TorusPoint>(&term.param)) {
            for (double t : tp->t) {
                if (!(t >= 0.0 && t < 1.0)) {
                    throw Error(ErrorCode::InvalidArgument, "torus coordinate outside [0,1)");
                }
            }
        } else {
            for (Complex z : std::get<ComplexPoint>(term.param).z) {
                if (!(std::abs(z) > 0.0)) {
                    throw Error(ErrorCode::InvalidArgument, "complex coordinate with zero modulus");
                }
            }
        }
    }
    for (std::size_t a = 0; a < terms_.size(); ++a) {
        for (std::size_t b = a + 1; b < terms_.size(); ++b) {
            const auto& pa = terms_[a].param;
            const auto& pb = terms_[b].param;
            bool same = false;
            if (is_torus(pa) && is_torus(pb)) {
                same = std::get<TorusPoint>(pa).t == std::get<TorusPoint>(pb).t;
            } else {
                same = to_complex(pa) == to_complex(pb);
            }
            if (same) {
                throw Error(ErrorCode::InvalidArgument,
                            "parameters " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
            }
        }
    }
}

bool ExponentialSum::all_torus() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return is_torus(t.param); });
}

std::vector<std::vector<double>> ExponentialSum::torus_parameters() const
{
    std::vector<std::vector<double>> out;
    out.reserve(terms_.size());
    for (const Term& term : terms_) {
        const auto* tp = std::get_if<TorusPoint>(&term.param);
        if (tp == nullptr) {
            throw Error(ErrorCode::InvalidArgument, "model has non-torus parameters");
        }
        out.push_back(tp->t);
    }
    return out;
}

std::vector<Complex> ExponentialSum::coefficients() const
{
    std::vector<Complex> out;
    out.reserve(terms_.size());
    for (const Term& term : terms_) {
        out.push_back(term.coeff);
    }
    return out;
}

MomentGrid::MomentGrid(int d, int n) : d_(d), n_(n)
{
    if (d < 1 || n < 0) {
        throw Error(ErrorCode::InvalidArgument, "moment grid needs d >= 1 and n >= 0");
    }
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= static_cast<std::size_t>(2 * n + 1);
    }
    values_.assign(total, Complex{});
}

MomentGrid::MomentGrid(int d, int n, std::vector<Complex> values) : MomentGrid(d, n)
{
    if (values.size() != values_.size()) {
        throw Error(ErrorCode::IncompleteGrid, "expected " + std::to_string(values_.size()) + " moments, got "
                                                   + std::to_string(values.size()));
    }
    values_ = std::move(values);
}

bool MomentGrid::contains(std::span<const int> k) const
{
    if (k.size() != static_cast<std::size_t>(d_)) {
        return false;
    }
    return std::all_of(k.begin(), k.end(), [this](int ki) { return ki >= -n_ && ki <= n_; });
}

std::size_t MomentGrid::offset(std::span<const int> k) const
{
    if (!contains(k)) {
        throw Error(ErrorCode::IncompleteGrid, "multi-index outside the moment grid");
    }
    const std::size_t side = static_cast<std::size_t>(2 * n_ + 1);
    std::size_t pos = 0;
    for (std::size_t i = k.size(); i-- > 0;) {
        pos = pos * side + static_cast<std::size_t>(k[i] + n_);
    }
    return pos;
}

MultiIndex MomentGrid::index_at(std::size_t offset) const
{
    const std::size_t side = static_cast<std::size_t>(2 * n_ + 1);
    MultiIndex k(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
        k[static_cast<std::size_t>(i)] = static_cast<int>(offset % side) - n_;
        offset /= side;
    }
    return k;
}

const Complex& MomentGrid::at(std::span<const int> k) const { return values_[offset(k)]; }
Complex& MomentGrid::at(std::span<const int> k) { return values_[offset(k)]; }

Complex eval_moment(const ExponentialSum& model, std::span<const int> k)
{
    if (k.size() != static_cast<std::size_t>(model.dimension())) {
        throw Error(ErrorCode::InvalidArgument, "multi-index dimension mismatch");
    }
    Complex sum{};
    for (const Term& term : model.terms()) {
        if (const auto* tp = std::get_if<TorusPoint>(&term.param)) {
            sum += term.coeff * unit_phasor(reduced_phase(k, tp->t));
        } else {
            Complex power{1.0, 0.0};
            const auto& z = std::get<ComplexPoint>(term.param).z;
            for (std::size_t i = 0; i < k.size(); ++i) {
                power *= ipow(z[i], k[i]);
            }
            sum += term.coeff * power;
        }
    }
    return sum;
}

MomentGrid sample_moments(const ExponentialSum& model, int n)
{
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "moment order must be >= 1");
    }
    MomentGrid grid(model.dimension(), n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const MultiIndex k = grid.index_at(i);
        grid.values()[i] = eval_moment(model, k);
    }
    return grid;
}

double wrap_unit(double x)
{
    double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1
    return r >= 1.0 ? 0.0 : r;
}

double wrap_distance(double a, double b)
{
    const double delta = std::fmod(std::abs(a - b), 1.0);
    return std::min(delta, 1.0 - delta);
}

double torus_distance(std::span<const double> a, std::span<const double> b)
{
    double dist = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dist = std::max(dist, wrap_distance(a[i], b[i]));
    }
    return dist;
}

double separation(const std::vector<std::vector<double>>& points)
{
    if (points.size() < 2) {
        throw Error(ErrorCode::NeedTwoPoints, "separation needs at least two points");
    }
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            sep = std::min(sep, torus_distance(points[a], points[b]));
        }
    }
    return sep;
}

ExponentialSum random_separated_model(int d, int M, double q, CoeffLaw law, std::uint64_t seed)
{
    if (d < 1 || M < 1 || !(q >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "random model needs d >= 1, M >= 1, q >= 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> points;
    int draws = 0;
    int rejected_in_row = 0;
    while (static_cast<int>(points.size()) < M) {
        if (draws++ >= kMaxDraws) {
            throw Error(ErrorCode::GenerationFailed, "no " + std::to_string(q) + "-separated configuration of "
                                                         + std::to_string(M) + " points in d="
                                                         + std::to_string(d) + " after "
                                                         + std::to_string(kMaxDraws) + " draws");
        }
        std::vector<double> candidate(static_cast<std::size_t>(d));
        for (double& c : candidate) {
            c = wrap_unit(unit(rng));
        }
        const bool ok = std::all_of(points.begin(), points.end(),
                                    [&](const auto& p) { return torus_distance(p, candidate) > q; });
        if (ok) {
            points.push_back(std::move(candidate));
            rejected_in_row = 0;
        } else if (++rejected_in_row >= kRestartAfter) {
            points.clear();
            rejected_in_row = 0;
        }
    }

    std::vector<Term> terms;
    terms.reserve(points.size());
    for (auto& p : points) {
        const double modulus = 0.5 + unit(rng);
        Complex coeff;
        if (law == CoeffLaw::Positive) {
            coeff = Complex{modulus, 0.0};
        } else {
            coeff = std::polar(modulus, kTwoPi * unit(rng));
        }
        terms.push_back(Term{coeff, TorusPoint{std::move(p)}});
    }
    return ExponentialSum(d, std::move(terms));
}

} // namespace prony
