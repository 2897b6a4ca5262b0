#ifndef PRONY_MODEL_HPP
#define PRONY_MODEL_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace prony {

using Complex = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Point of the torus T^d stored by its angle vector t in [0,1)^d; the
/// parameter is z = exp(2 pi i t) coordinatewise.
struct TorusPoint {
    std::vector<double> t;
};

/// General parameter in (C \ {0})^d.
struct ComplexPoint {
    std::vector<Complex> z;
};

using ParameterPoint = std::variant<TorusPoint, ComplexPoint>;

std::size_t dimension_of(const ParameterPoint& p);
bool is_torus(const ParameterPoint& p);
/// Coordinates as complex numbers (torus points are exponentiated).
std::vector<Complex> to_complex(const ParameterPoint& p);

struct Term {
    Complex coeff;
    ParameterPoint param;
};

/// M-sparse d-variate exponential sum f(k) = sum_j c_j z_j^k.
///
/// Construction validates the invariants: M >= 1, nonzero coefficients,
/// torus angles in [0,1), nonzero complex coordinates, pairwise distinct
/// parameters. Torus parameters compare exactly on t.
class ExponentialSum {
public:
    ExponentialSum(int d, std::vector<Term> terms);

    int dimension() const noexcept { return d_; }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool all_torus() const;

    /// Angle vectors; throws InvalidArgument if any parameter is not a torus point.
    std::vector<std::vector<double>> torus_parameters() const;
    std::vector<Complex> coefficients() const;

private:
    int d_;
    std::vector<Term> terms_;
};

/// Complete table of moments f(k), k in {-n,...,n}^d.
///
/// Values are stored densely with coordinate 1 fastest; offset(k) =
/// sum_i (k_i + n) (2n+1)^(i-1).
class MomentGrid {
public:
    MomentGrid(int d, int n);
    MomentGrid(int d, int n, std::vector<Complex> values);

    int dimension() const noexcept { return d_; }
    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(std::span<const int> k) const;
    std::size_t offset(std::span<const int> k) const;
    MultiIndex index_at(std::size_t offset) const;

    const Complex& at(std::span<const int> k) const;
    Complex& at(std::span<const int> k);

    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }

private:
    int d_;
    int n_;
    std::vector<Complex> values_;
};

/// Sum_j c_j z_j^k; torus terms use exp(2 pi i (k.t mod 1)).
Complex eval_moment(const ExponentialSum& model, std::span<const int> k);

MomentGrid sample_moments(const ExponentialSum& model, int n);

enum class CoeffLaw {
    /// Modulus uniform in [0.5, 1.5], phase uniform.
    RandomPhase,
    /// Real, uniform in [0.5, 1.5].
    Positive,
};

/// Seeded q-separated random torus model. Throws GenerationFailed when the
/// draw budget is exhausted.
ExponentialSum random_separated_model(int d, int M, double q, CoeffLaw law, std::uint64_t seed);

/// Per-coordinate wrap-around distance min(|a-b| mod 1, 1 - |a-b| mod 1).
double wrap_distance(double a, double b);
/// Wrap-around l-infinity distance between two torus angle vectors.
double torus_distance(std::span<const double> a, std::span<const double> b);
/// Reduce into [0,1).
double wrap_unit(double x);

/// Minimum pairwise wrap-around l-infinity distance. Throws NeedTwoPoints
/// for fewer than two points.
double separation(const std::vector<std::vector<double>>& points);

} // namespace prony

#endif
