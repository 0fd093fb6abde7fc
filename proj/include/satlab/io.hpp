#pragma once

#include <json.hpp>

#include "satlab/constructors.hpp"
#include "satlab/oracle.hpp"

namespace satlab::io {

using nlohmann::json;

json lattice_json(const Context& ctx);

json charset_json(const Context& ctx, const CharSet& s);
CharSet charset_from_json(const Context& ctx, const json& j);

/// {"group": ..., "edges": [[k,h], ...]} with strict edges only, sorted.
json ts_json(const Context& ctx, const TransferSystem& ts);
/// Rebuilds reflexive + edges and validates; throws on mismatch or invalid.
TransferSystem ts_from_json(const Context& ctx, const json& j);

json diagram_json(const Context& ctx, const Diagram& d);
Diagram diagram_from_json(const Context& ctx, const json& j);

json inductor_json(const Context& ctx, const SubInductor& j);
std::shared_ptr<const SubInductor> inductor_from_json(const Context& ctx, const json& j);

json verify_report_json(const VerifyReport& r);
json tight_pair_json(const Context& ctx, const TightPair& tp);
/// Loads D and J; the stored certificate is ignored and recomputed.
TightPair tight_pair_from_json(const Context& ctx, const json& j);

json rank_two_run_json(const RankTwoRun& run);
json bounds_json(const RankTwoBounds& b);

/// Tensor of tight-pair bundles living on coprime factor groups: builds the
/// product context (specs concatenated in argument order), embeds each
/// factor, and re-verifies the glued pair.
struct TensorResult {
    std::shared_ptr<const Context> ctx;
    TightPair pair;
};
TensorResult tensor_bundles(const std::vector<json>& bundles);

/// Writes via a temp file plus rename, so readers never see partial output.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace satlab::io
