#include <doctest.h>

#include <algorithm>

#include "oracle_values.hpp"
#include "prony/error.hpp"
#include "support.hpp"

using namespace prony;
using testing::two_point_model;
using testing::three_atom_model;

TEST_SUITE("model")
{
    TEST_CASE("moments of the two-point model")
    {
        const auto f = two_point_model();
        CHECK(eval_moment(f, std::vector{0, 0}) == Complex(2.0, 0.0));
        CHECK(std::abs(eval_moment(f, std::vector{1, 0})) < 1e-15);
        const ExponentialSum single(1, {{1.0, TorusPoint{{0.37}}}});
        CHECK(eval_moment(single, std::vector{0}) == Complex(1.0, 0.0));
    }

    TEST_CASE("sample_moments fills the symmetric grid")
    {
        const MomentGrid g = sample_moments(two_point_model(), 2);
        CHECK(g.size() == 25);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = g.index_at(i);
            const double expected = (k[0] + k[1]) % 2 == 0 ? 2.0 : 0.0;
            CHECK(std::abs(g.values()[i] - expected) < 1e-14);
        }

        const MomentGrid one = sample_moments(ExponentialSum(1, {{1.0, TorusPoint{{0.0}}}}), 1);
        for (int k = -1; k <= 1; ++k) {
            CHECK(one.at(std::vector{k}) == Complex(1.0, 0.0));
        }
        CHECK_THROWS_AS(sample_moments(two_point_model(), 0), Error);
    }

    TEST_CASE("moments agree with direct summation and frozen values")
    {
        const auto f = three_atom_model();
        const MomentGrid g = sample_moments(f, 30);
        CHECK(g.size() == 61);
        for (int k = -30; k <= 30; ++k) {
            CHECK(std::abs(g.at(std::vector{k}) - testing::direct_moment(f, {k})) < 1e-13);
        }
        CHECK(std::abs(g.at(std::vector{1}) - oracle::three_atom_moment_1) < 1e-14);
        CHECK(std::abs(g.at(std::vector{7}) - oracle::three_atom_moment_7) < 1e-14);
        CHECK(std::abs(g.at(std::vector{30}) - oracle::three_atom_moment_30) < 1e-13);
        CHECK(std::abs(g.at(std::vector{-13}) - oracle::three_atom_moment_m13) < 1e-13);
    }

    TEST_CASE("moment grid indexing")
    {
        MomentGrid g(2, 3);
        CHECK(g.size() == 49);
        CHECK(g.offset(std::vector{-3, -3}) == 0);
        CHECK(g.offset(std::vector{-2, -3}) == 1);
        CHECK(g.offset(std::vector{-3, -2}) == 7);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(g.offset(g.index_at(i)) == i);
        }
        CHECK_FALSE(g.contains(std::vector{4, 0}));
        CHECK_THROWS_AS(MomentGrid(2, 1, std::vector<Complex>(8)), Error);
    }

    TEST_CASE("model invariants are enforced")
    {
        CHECK_THROWS_AS(ExponentialSum(1, {}), Error);
        CHECK_THROWS_AS(ExponentialSum(1, {{0.0, TorusPoint{{0.1}}}}), Error);
        CHECK_THROWS_AS(ExponentialSum(1, {{1.0, TorusPoint{{1.0}}}}), Error);
        CHECK_THROWS_AS(ExponentialSum(1, {{1.0, TorusPoint{{-0.1}}}}), Error);
        CHECK_THROWS_AS(ExponentialSum(1, {{1.0, TorusPoint{{0.2}}}, {2.0, TorusPoint{{0.2}}}}), Error);
        CHECK_THROWS_AS(ExponentialSum(2, {{1.0, TorusPoint{{0.2}}}}), Error);
        CHECK_THROWS_AS(ExponentialSum(1, {{1.0, ComplexPoint{{Complex{}}}}}), Error);
        const ExponentialSum mixed(1, {{1.0, ComplexPoint{{Complex(2.0, 0.0)}}}, {1.0, TorusPoint{{0.5}}}});
        CHECK_FALSE(mixed.all_torus());
        CHECK_THROWS_AS(mixed.torus_parameters(), Error);
    }

    TEST_CASE("complex parameters allow negative powers")
    {
        const ExponentialSum f(1, {{2.0, ComplexPoint{{Complex(2.0, 0.0)}}}});
        CHECK(std::abs(eval_moment(f, std::vector{-2}) - 0.5) < 1e-15);
        CHECK(std::abs(eval_moment(f, std::vector{3}) - 16.0) < 1e-12);
    }

    TEST_CASE("conjugation symmetry of moments")
    {
        std::mt19937_64 rng(3);
        const auto f = random_separated_model(2, 3, 0.2, CoeffLaw::RandomPhase, 11);
        std::vector<Term> conj_terms;
        for (const Term& t : f.terms()) {
            conj_terms.push_back({std::conj(t.coeff), t.param});
        }
        const ExponentialSum g(2, conj_terms);
        const auto positive = random_separated_model(2, 3, 0.2, CoeffLaw::Positive, 11);
        for (int i = 0; i < 50; ++i) {
            const std::vector<int> k{static_cast<int>(rng() % 41) - 20, static_cast<int>(rng() % 41) - 20};
            const std::vector<int> minus{-k[0], -k[1]};
            CHECK(std::abs(eval_moment(f, minus) - std::conj(eval_moment(g, k))) < 1e-13);
            CHECK(std::abs(eval_moment(positive, minus) - std::conj(eval_moment(positive, k))) < 1e-13);
        }
        CHECK(std::abs(eval_moment(f, std::vector{0, 0}) - [&] {
                  Complex s{};
                  for (const Term& t : f.terms()) {
                      s += t.coeff;
                  }
                  return s;
              }()) < 1e-15);
    }

    TEST_CASE("separation")
    {
        CHECK(separation({{0.12}, {1.0 / std::numbers::pi}, {std::exp(-0.5)}}) ==
              doctest::Approx(oracle::three_atom_separation).epsilon(1e-14));
        CHECK(std::abs(oracle::three_atom_separation - 0.19831) < 1e-5);
        CHECK(separation({{0.0, 0.0}, {0.5, 0.5}}) == doctest::Approx(0.5));
        CHECK(separation({{0.0}, {0.9}}) == doctest::Approx(0.1));
        CHECK_THROWS_AS(separation({{0.3}}), Error);
        try {
            separation({});
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NeedTwoPoints);
        }
    }

    TEST_CASE("separation is permutation and shift invariant")
    {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::vector<double>> pts;
            for (int j = 0; j < 5; ++j) {
                pts.push_back(testing::random_point(rng, 2));
            }
            const double base = separation(pts);
            std::vector<std::vector<double>> shuffled = pts;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            CHECK(separation(shuffled) == doctest::Approx(base).epsilon(1e-12));
            const auto shift = testing::random_point(rng, 2);
            for (auto& p : shuffled) {
                for (std::size_t i = 0; i < p.size(); ++i) {
                    p[i] = wrap_unit(p[i] + shift[i]);
                }
            }
            CHECK(separation(shuffled) == doctest::Approx(base).epsilon(1e-9));
        }
    }

    TEST_CASE("random separated models")
    {
        const auto a = random_separated_model(1, 3, 0.1, CoeffLaw::Positive, 7);
        const auto b = random_separated_model(1, 3, 0.1, CoeffLaw::Positive, 7);
        CHECK(a.torus_parameters() == b.torus_parameters());
        CHECK(a.coefficients() == b.coefficients());
        CHECK(separation(a.torus_parameters()) > 0.1);
        for (Complex c : a.coefficients()) {
            CHECK(c.imag() == 0.0);
            CHECK(c.real() >= 0.5);
            CHECK(c.real() <= 1.5);
        }

        const auto c = random_separated_model(2, 4, 0.2, CoeffLaw::Positive, 1);
        CHECK(separation(c.torus_parameters()) > 0.2);

        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto m = random_separated_model(2, 5, 0.25, CoeffLaw::RandomPhase, seed);
            CHECK(separation(m.torus_parameters()) > 0.25);
            for (Complex coeff : m.coefficients()) {
                CHECK(std::abs(coeff) >= 0.5);
                CHECK(std::abs(coeff) <= 1.5);
            }
        }

        try {
            random_separated_model(1, 100, 0.5, CoeffLaw::RandomPhase, 1);
            FAIL("expected GenerationFailed");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::GenerationFailed);
        }
    }

    TEST_CASE("wrap helpers")
    {
        CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
        CHECK(wrap_unit(1.0) == 0.0);
        CHECK(wrap_unit(-1e-18) < 1.0);
        CHECK(wrap_distance(0.95, 0.05) == doctest::Approx(0.1));
        CHECK(torus_distance(std::vector{0.99, 0.5}, std::vector{0.01, 0.45}) == doctest::Approx(0.05));
    }
}
