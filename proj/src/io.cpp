#include "prony/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "prony/error.hpp"

namespace prony::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what)
{
    throw Error(ErrorCode::ParseError, what);
}

const json& member(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        parse_fail(std::string("missing member \"") + key + "\"");
    }
    return j.at(key);
}

int int_member(const json& j, const char* key)
{
    const json& v = member(j, key);
    if (!v.is_number_integer()) {
        parse_fail(std::string("member \"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

double number(const json& v, const char* what)
{
    if (!v.is_number()) {
        parse_fail(std::string(what) + " must be a number");
    }
    return v.get<double>();
}

json finite_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

std::string join_index(const MultiIndex& k)
{
    std::string out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(k[i]);
    }
    return out;
}

} // namespace

json to_json(Complex c)
{
    return json{{"re", c.real()}, {"im", c.imag()}};
}

Complex complex_from_json(const json& j)
{
    return {number(member(j, "re"), "re"), number(member(j, "im"), "im")};
}

json to_json(const ExponentialSum& model)
{
    json terms = json::array();
    for (const Term& term : model.terms()) {
        json t{{"coeff", to_json(term.coeff)}};
        if (const auto* tp = std::get_if<TorusPoint>(&term.param)) {
            t["t"] = tp->t;
        } else {
            json z = json::array();
            for (Complex c : std::get<ComplexPoint>(term.param).z) {
                z.push_back(to_json(c));
            }
            t["z"] = std::move(z);
        }
        terms.push_back(std::move(t));
    }
    return json{{"d", model.dimension()}, {"terms", std::move(terms)}};
}

ExponentialSum model_from_json(const json& j)
{
    const int d = int_member(j, "d");
    const json& terms = member(j, "terms");
    if (!terms.is_array()) {
        parse_fail("\"terms\" must be an array");
    }
    std::vector<Term> out;
    for (const json& term : terms) {
        const Complex c = complex_from_json(member(term, "coeff"));
        if (term.contains("t")) {
            std::vector<double> t;
            for (const json& x : term.at("t")) {
                t.push_back(number(x, "torus angle"));
            }
            out.push_back({c, TorusPoint{std::move(t)}});
        } else if (term.contains("z")) {
            std::vector<Complex> z;
            for (const json& x : term.at("z")) {
                z.push_back(complex_from_json(x));
            }
            out.push_back({c, ComplexPoint{std::move(z)}});
        } else {
            parse_fail("term needs a \"t\" or \"z\" member");
        }
    }
    try {
        return ExponentialSum(d, std::move(out));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, "invalid model: " + e.detail());
    }
}

json to_json(const MomentGrid& grid)
{
    json entries = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex v = grid.values()[i];
        entries.push_back(json{{"k", grid.index_at(i)}, {"re", v.real()}, {"im", v.imag()}});
    }
    return json{{"d", grid.dimension()}, {"n", grid.order()}, {"entries", std::move(entries)}};
}

MomentGrid grid_from_json(const json& j)
{
    const int d = int_member(j, "d");
    const int n = int_member(j, "n");
    if (d < 1 || n < 0) {
        parse_fail("grid needs d >= 1 and n >= 0");
    }
    const json& entries = member(j, "entries");
    if (!entries.is_array()) {
        parse_fail("\"entries\" must be an array");
    }
    MomentGrid grid(d, n);
    std::vector<char> seen(grid.size(), 0);
    for (const json& e : entries) {
        const json& kj = member(e, "k");
        if (!kj.is_array() || kj.size() != static_cast<std::size_t>(d)) {
            parse_fail("entry index has the wrong length");
        }
        MultiIndex k;
        for (const json& x : kj) {
            if (!x.is_number_integer()) {
                parse_fail("entry index must be integers");
            }
            k.push_back(x.get<int>());
        }
        if (!grid.contains(k)) {
            throw Error(ErrorCode::IncompleteGrid, "entry index [" + join_index(k) + "] outside {-n..n}^d");
        }
        const std::size_t off = grid.offset(k);
        if (seen[off]) {
            throw Error(ErrorCode::IncompleteGrid, "duplicate entry [" + join_index(k) + "]");
        }
        seen[off] = 1;
        grid.values()[off] = {number(member(e, "re"), "re"), number(member(e, "im"), "im")};
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw Error(ErrorCode::IncompleteGrid, "missing entry [" + join_index(grid.index_at(i)) + "]");
        }
    }
    return grid;
}

json to_json(const ReconstructionResult& result)
{
    json warnings = json::array();
    for (const Warning& w : result.warnings) {
        warnings.push_back(json{{"code", to_string(w.code)}, {"message", w.message}});
    }
    json sv = json::array();
    for (Eigen::Index i = 0; i < result.singular_values.size(); ++i) {
        sv.push_back(result.singular_values(i));
    }
    return json{
        {"d", result.dimension},
        {"n", result.order},
        {"model", result.model ? to_json(*result.model) : json(nullptr)},
        {"rank", result.rank},
        {"singular_values", std::move(sv)},
        {"spectrum_complete", result.spectrum_complete},
        {"spectral_gap", finite_or_null(result.spectral_gap)},
        {"root_energies", result.root_energies},
        {"residual", result.residual},
        {"warnings", std::move(warnings)},
    };
}

ExponentialSum estimate_from_json(const json& j)
{
    if (j.is_object() && j.contains("model")) {
        if (j.at("model").is_null()) {
            parse_fail("result document carries no model");
        }
        return model_from_json(j.at("model"));
    }
    return model_from_json(j);
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        parse_fail("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        parse_fail(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) {
        parse_fail("cannot write " + path);
    }
    out << j.dump(2) << '\n';
    if (!out) {
        parse_fail("write failed for " + path);
    }
}

void write_matrix_csv(std::ostream& out, const MomentMatrix& matrix)
{
    const IndexSet& set = matrix.index_set;
    std::ostringstream buf;
    buf.precision(17);
    buf << "row_k;col_k;re;im\n";
    for (std::size_t r = 0; r < set.size(); ++r) {
        for (std::size_t c = 0; c < set.size(); ++c) {
            const Complex v = matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            buf << join_index(set[r]) << ';' << join_index(set[c]) << ';' << v.real() << ';' << v.imag() << '\n';
        }
    }
    out << buf.str();
}

void write_certificate_csv(std::ostream& out, int d, const EnergyField::GridValues& grid)
{
    std::ostringstream buf;
    buf.precision(17);
    for (int i = 1; i <= d; ++i) {
        buf << "t_" << i << ',';
    }
    buf << "certificate,kernel_energy\n";
    const auto g = static_cast<std::size_t>(grid.per_dim);
    std::vector<std::size_t> coord(static_cast<std::size_t>(d), 0);
    for (std::size_t idx = 0; idx < grid.energy.size(); ++idx) {
        for (std::size_t i = 0; i < coord.size(); ++i) {
            buf << static_cast<double>(coord[i]) / static_cast<double>(g) << ',';
        }
        buf << grid.certificate[idx] << ',' << grid.energy[idx] << '\n';
        for (std::size_t i = 0; i < coord.size(); ++i) {
            if (++coord[i] < g) {
                break;
            }
            coord[i] = 0;
        }
    }
    out << buf.str();
}

} // namespace prony::io
