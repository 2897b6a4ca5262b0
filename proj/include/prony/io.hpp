#ifndef PRONY_IO_HPP
#define PRONY_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "prony/kernel.hpp"
#include "prony/recover.hpp"
#include "prony/variety.hpp"

namespace prony::io {

using nlohmann::json;

json to_json(Complex c);
Complex complex_from_json(const json& j);

json to_json(const ExponentialSum& model);
ExponentialSum model_from_json(const json& j);

json to_json(const MomentGrid& grid);
/// Requires every one of the (2n+1)^d entries exactly once.
MomentGrid grid_from_json(const json& j);

json to_json(const ReconstructionResult& result);
/// Accepts a result document (with a "model" member) or a bare model.
ExponentialSum estimate_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// "row_k;col_k;re;im", multi-index components joined by ','.
void write_matrix_csv(std::ostream& out, const MomentMatrix& matrix);

/// "t_1,...,t_d,certificate,kernel_energy", coordinate 1 fastest.
void write_certificate_csv(std::ostream& out, int d, const EnergyField::GridValues& grid);

} // namespace prony::io

#endif
