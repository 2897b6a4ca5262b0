#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prony/error.hpp"
#include "prony/io.hpp"
#include "support.hpp"

using namespace prony;
using io::json;

TEST_SUITE("io")
{
    TEST_CASE("model JSON round trip")
    {
        const ExponentialSum f(1, {{Complex(1.5, -0.25), TorusPoint{{0.125}}},
                                   {Complex(-2.0, 0.0), ComplexPoint{{Complex(0.5, 2.0)}}}});
        const json j = io::to_json(f);
        CHECK(j["d"] == 1);
        CHECK(j["terms"][0]["coeff"]["re"] == 1.5);
        CHECK(j["terms"][0]["t"][0] == 0.125);
        CHECK(j["terms"][1]["z"][0]["im"] == 2.0);
        const ExponentialSum g = io::model_from_json(json::parse(j.dump()));
        CHECK(g.coefficients() == f.coefficients());
        CHECK(std::get<TorusPoint>(g.terms()[0].param).t == std::vector{0.125});
        CHECK(std::get<ComplexPoint>(g.terms()[1].param).z[0] == Complex(0.5, 2.0));
    }

    TEST_CASE("malformed models")
    {
        CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"terms":[]})")), Error);
        CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"d":1,"terms":[{"coeff":{"re":1,"im":0}}]})")), Error);
        try {
            io::model_from_json(json::parse(R"({"d":1,"terms":[{"coeff":{"re":1,"im":0},"t":[1.5]}]})"));
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    }

    TEST_CASE("grid JSON round trip and completeness")
    {
        const MomentGrid g = sample_moments(testing::two_point_model(), 1);
        const json j = io::to_json(g);
        CHECK(j["entries"].size() == 9);
        CHECK(j["entries"][0]["k"] == json::array({-1, -1}));
        const MomentGrid back = io::grid_from_json(json::parse(j.dump()));
        CHECK(std::equal(back.values().begin(), back.values().end(), g.values().begin()));

        json missing = j;
        missing["entries"].erase(missing["entries"].begin() + 4);
        try {
            io::grid_from_json(missing);
            FAIL("expected IncompleteGrid");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IncompleteGrid);
        }
        json dup = j;
        dup["entries"][3] = dup["entries"][4];
        CHECK_THROWS_AS(io::grid_from_json(dup), Error);
        json outside = j;
        outside["entries"][0]["k"] = json::array({2, 0});
        CHECK_THROWS_AS(io::grid_from_json(outside), Error);
    }

    TEST_CASE("result JSON")
    {
        const auto r = prony_reconstruct(sample_moments(testing::two_point_model(), 2));
        const json j = io::to_json(r);
        CHECK(j["rank"] == 2);
        CHECK(j["singular_values"].size() == 9);
        CHECK(j["model"]["terms"].size() == 2);
        CHECK(j["warnings"].is_array());
        CHECK(j["spectral_gap"].is_number());
        const ExponentialSum e = io::estimate_from_json(json::parse(j.dump()));
        CHECK(e.size() == 2);
        CHECK(io::estimate_from_json(io::to_json(testing::two_point_model())).size() == 2);

        const auto empty = prony_reconstruct(MomentGrid(1, 2));
        const json je = io::to_json(empty);
        CHECK(je["model"].is_null());
        CHECK(je["spectral_gap"].is_null());
        CHECK(je["warnings"][0]["code"] == "ZeroRank");
        CHECK_THROWS_AS(io::estimate_from_json(je), Error);
    }

    TEST_CASE("files")
    {
        const auto dir = std::filesystem::temp_directory_path() / "prony_io_test";
        std::filesystem::create_directories(dir);
        const std::string path = (dir / "model.json").string();
        io::write_json_file(path, io::to_json(testing::three_atom_model()));
        CHECK(io::model_from_json(io::read_json_file(path)).size() == 3);
        CHECK_THROWS_AS(io::read_json_file((dir / "absent.json").string()), Error);
        {
            std::ofstream bad(dir / "bad.json");
            bad << "{ not json";
        }
        CHECK_THROWS_AS(io::read_json_file((dir / "bad.json").string()), Error);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("matrix CSV")
    {
        const MomentMatrix T = build_toeplitz(sample_moments(testing::two_point_model(), 1));
        std::ostringstream out;
        io::write_matrix_csv(out, T);
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "row_k;col_k;re;im");
        std::getline(in, line);
        CHECK(line == "0,0;0,0;2;0");
        std::getline(in, line);
        CHECK(line == "0,0;1,0;0;0");
        int rows = 3;
        while (std::getline(in, line)) {
            ++rows;
        }
        CHECK(rows == 1 + 16);
    }

    TEST_CASE("certificate CSV")
    {
        EnergyField::GridValues grid{2, {0.0, 1.0, 2.0, 3.0}, {1.0, 0.5, 0.25, 0.0}};
        std::ostringstream out;
        io::write_certificate_csv(out, 2, grid);
        CHECK(out.str() == "t_1,t_2,certificate,kernel_energy\n"
                           "0,0,1,0\n"
                           "0.5,0,0.5,1\n"
                           "0,0.5,0.25,2\n"
                           "0.5,0.5,0,3\n");
    }
}
