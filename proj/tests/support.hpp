#ifndef PRONY_TESTS_SUPPORT_HPP
#define PRONY_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "prony/model.hpp"
#include "prony/recover.hpp"
#include "prony/structure.hpp"

namespace testing {

using namespace prony;

inline ExponentialSum two_point_model()
{
    return ExponentialSum(2, {{1.0, TorusPoint{{0.0, 0.0}}}, {1.0, TorusPoint{{0.5, 0.5}}}});
}

inline ExponentialSum three_atom_model()
{
    return ExponentialSum(1, {{1.0, TorusPoint{{0.12}}},
                              {1.0, TorusPoint{{1.0 / std::numbers::pi}}},
                              {1.0, TorusPoint{{std::exp(-0.5)}}}});
}

/// Direct summation in long double without phase reduction.
inline Complex direct_moment(const ExponentialSum& model, const std::vector<int>& k)
{
    std::complex<long double> sum{};
    for (const Term& term : model.terms()) {
        const auto& t = std::get<TorusPoint>(term.param).t;
        long double phase = 0.0L;
        for (std::size_t i = 0; i < k.size(); ++i) {
            phase += static_cast<long double>(k[i]) * static_cast<long double>(t[i]);
        }
        phase *= 2.0L * std::numbers::pi_v<long double>;
        sum += std::complex<long double>(term.coeff) * std::complex<long double>(std::cos(phase), std::sin(phase));
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

inline std::vector<ParameterPoint> params_of(const ExponentialSum& model)
{
    std::vector<ParameterPoint> out;
    for (const Term& t : model.terms()) {
        out.push_back(t.param);
    }
    return out;
}

/// Seeded suite instance: a random separated model with its recommended order.
struct SuiteInstance {
    ExponentialSum model;
    double q;
    int n;
};

/// 50 instances with d in {1, 2}, M <= 4, plus 5 with d = 3, M <= 3.
inline std::vector<SuiteInstance> round_trip_suite(CoeffLaw law = CoeffLaw::RandomPhase)
{
    std::vector<SuiteInstance> out;
    std::mt19937_64 rng(20240917);
    for (int i = 0; i < 50; ++i) {
        const int d = 1 + i % 2;
        const int M = 1 + static_cast<int>(rng() % 4);
        // d = 1 keeps n moderate; d = 2 keeps N = (n+1)^2 within a few hundred
        const double q = d == 1 ? std::uniform_real_distribution<double>(0.05, 0.8 / M)(rng)
                                : std::uniform_real_distribution<double>(0.2, 0.34)(rng);
        auto model = random_separated_model(d, M, q, law, 1000 + static_cast<std::uint64_t>(i));
        out.push_back({std::move(model), q, recommended_order(M, q, d)});
    }
    for (int i = 0; i < 5; ++i) {
        const int M = 1 + i % 3;
        const double q = std::uniform_real_distribution<double>(0.47, 0.49)(rng);
        auto model = random_separated_model(3, M, q, law, 5000 + static_cast<std::uint64_t>(i));
        out.push_back({std::move(model), q, recommended_order(M, q, 3)});
    }
    return out;
}

inline std::vector<double> random_point(std::mt19937_64& rng, int d)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t(static_cast<std::size_t>(d));
    for (auto& x : t) {
        x = u(rng);
    }
    return t;
}

} // namespace testing

#endif
