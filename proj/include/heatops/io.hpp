// io.hpp — JSON exchange formats for operators, channels, realizations and
// chain descriptors, plus atomic file output.

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "heatops/analysis.hpp"
#include "heatops/realizations.hpp"
#include "heatops/synthesis.hpp"

namespace heatops::io {

using json = nlohmann::json;

// Square matrices: {"dim": n, "entries": [[re, im], ...]} row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json hermitian_to_json(const HermitianOperator& h);
HermitianOperator hermitian_from_json(const json& j, Units units);

json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

// Rectangular isometries: {"dim_in", "dim_out", "entries"} row-major.
json isometry_to_json(const Isometry& v);
Isometry isometry_from_json(const json& j);

// {"dim_in", "dim_out", "kraus": [entries, ...], "minimal"}.
json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const json& j);

// {"dim_A", "beta", "bath_h", "bath_h_out"?, "isometry"}.
json realization_to_json(const DenseRealization& r);
DenseRealization realization_from_json(const json& j);

json heat_report_to_json(const HeatReport& report);

// Chain descriptor {d, r, base_x, base_y, c, s, N, M, beta,
// epsilon_tail_achieved, delta_achieved, ln_Z_B, ...} plus the basis data
// needed to rebuild the chain exactly.
json chain_to_json(const ChainRealization& chain);
ChainRealization chain_from_json(const json& j);

json verdict_to_json(const AdmissibilityVerdict& verdict);

std::string serialize(const json& j);

// Write-to-temporary then rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);
json load_json(const std::filesystem::path& path);

} // namespace heatops::io
