#pragma once

// JSON and CSV forms of every artifact the toolkit reads or writes.

#include "hodgecover/complex_builder.hpp"
#include "hodgecover/diagnostics.hpp"
#include "hodgecover/hodge.hpp"
#include "hodgecover/moe.hpp"
#include "hodgecover/plan.hpp"
#include "hodgecover/selector.hpp"
#include "hodgecover/wanda.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace hodgecover {

using nlohmann::json;

json to_json(const Complex2& k);
Complex2 complex_from_json(const json& j);

json to_json(const HodgeDecomp& d);

json to_json(const SurvivorPlan& p);
SurvivorPlan plan_from_json(const json& j);

json to_json(const MoeLayer& layer);
MoeLayer layer_from_json(const json& j);

json to_json(const BarrierTable& t);
BarrierTable barriers_from_json(const json& j);
void write_pairwise_csv(std::ostream& os, const Eigen::MatrixXd& pairwise);

json to_json(const PruneMask& m);
PruneMask mask_from_json(const json& j);

json to_json(const LayerBudget& b);
json to_json(const FiltrationResult& f);
void write_betti_curve_csv(std::ostream& os, const std::vector<BettiPoint>& curve);
json to_json(const LayerDiagnostics& d);
json to_json(const RetainedMass& r);

/// 64-bit FNV-1a of a string.
std::uint64_t fnv1a64(const std::string& bytes);
/// Hex FNV-1a of the compact, key-sorted dump of `j`.
std::string config_hash(const json& j);

/// Throws DataError when the file cannot be read or parsed.
json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline. Throws DataError when unwritable.
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hodgecover
