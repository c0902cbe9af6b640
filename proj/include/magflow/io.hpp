#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "magflow/block_operator.hpp"
#include "magflow/flow.hpp"
#include "magflow/invariant.hpp"
#include "magflow/landau.hpp"
#include "magflow/potential.hpp"
#include "magflow/quadratic.hpp"

namespace magflow::io {

using nlohmann::json;

/// {num_blocks, block_dim, hermitian, blocks: [{n, m, re, im}]}, re/im row-major.
/// Doubles are written in shortest round-trip form, so reading back is bit-exact.
json to_json(const BlockOperator& a);
BlockOperator block_operator_from_json(const json& j);

/// {atoms: [{w, y: [y1, y2]}]}
json to_json(const GaussianMixture& mix);
GaussianMixture mixture_from_json(const json& j);

json to_json(const InvariantReport& r);
json to_json(const BoundAudit& a);
json to_json(const LinearCaseReport& r);
json to_json(const DotCaseReport& r);
json to_json(const HamiltonianEigenReport& r);
json to_json(const Truncation& t);
json to_json(const IterationTrace& t);

/// State vector from a JSON array [re0, im0, re1, im1, ...].
Vec state_from_json(const json& j);

// CSV writers. With `timestamp`, the first line is "# generated <UTC time>".
std::string trace_csv(const IterationTrace& trace, bool timestamp);
std::string evolution_csv(const EvolutionTable& table, bool timestamp);
std::string decay_profile_csv(const DecayProfile& profile, bool timestamp);
std::string raster_csv(const std::vector<std::array<double, 3>>& rows, bool timestamp);

std::string timestamp_line();

/// Pretty-printed JSON with a trailing newline; adds a "generated" field to
/// top-level objects when `timestamp` is set.
std::string dump(json j, bool timestamp);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace magflow::io
