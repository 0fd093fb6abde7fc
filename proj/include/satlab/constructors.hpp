#pragma once

#include <optional>

#include "satlab/engine.hpp"

namespace satlab {

/// Chain tight pair inside the (cyclic) Sylow p-part of the context:
/// J on covers maps chi to {s(chi), conj(s(conj chi))} for the canonical
/// section s, and D(H_i) = {1, tau_i, conj tau_i} with tau_i the lex-least
/// character induced from the trivial one below that avoids Res_J.
/// Requires the p-part cyclic and p >= 5.
PartPair cyclic_part(const Context& ctx, int prime_index);

/// Standalone tight pair on C_{p^n}; builds its own context.
/// (p, n) with p >= 5 prime, n >= 1.
struct OwnedTightPair {
    std::shared_ptr<const Context> ctx;
    TightPair pair;
};
OwnedTightPair cyclic_tight_pair(long long p, int n);

/// Largest C with D C-clustered: the minimum of |J[D]_K^H(chi)| over all
/// rank-one triples below `top`. Empty triple set gives INT_MAX.
int clusteredness(const Context& ctx, const Diagram& d, int top = -1);

/// Uniform index in [0, n) by rejection from the raw generator stream, so the
/// draw sequence does not depend on the standard library.
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

/// D^T: adds one conjugation-closed random pair {tau(H), conj tau(H)} at each
/// H in T, with tau(H) uniform in J[D]_1^H(1) \ {1_H}. Requires D
/// Gal-invariant and 2-clustered below `top` (so every pool is nonempty).
Diagram sample_enlargement(const Context& ctx, const Diagram& d, const std::vector<int>& t,
                           std::mt19937_64& rng, int top = -1);

/// The three sample properties: D^T Gal-invariant with 1_H absent; the new
/// part nonempty at every H in T; restrictions of the new part avoiding D.
/// Returns "" when all hold.
std::string check_sample_properties(const Context& ctx, const Diagram& d, const Diagram& dt,
                                    const std::vector<int>& t, int top = -1);

struct RankTwoOptions {
    uint64_t seed = 0;
    int retries_per_stage = 64;
    /// Acceptance keeps clusteredness >= max(floor(theta * C_prev), needed)
    /// where needed is 2 for intermediate stages and 1 for the final stage.
    double theta = 0.0;
    bool validate_samples = true;
};

struct StageInfo {
    int stage = 0;        // stage i samples over T_{i+1}
    int threshold = 0;    // acceptance threshold for clusteredness
    int achieved = -1;    // best clusteredness seen this stage
    int retries = 0;      // samples drawn
    bool accepted = false;
    // Reference constants of the analysis, from the achieved values.
    double alpha = 0, beta = 0, gamma = 0, rho = 0;
};

/// Positive real in natural-log space. sat = -1 marks positive values below
/// exp(-1e300) (log not representable), sat = +1 values above exp(+1e300).
struct LogVal {
    double ln = 0.0;
    int sat = 0;
    bool comparable() const { return sat == 0; }
};

struct RankTwoBounds {
    int n = 0;
    std::vector<LogVal> b;  // b[0..n]
    LogVal c;
    LogVal d;  // threshold constant; usually astronomically large
};

/// Tabulates the constant schedule of the rank-two analysis in log space:
/// b_{n,0} = 1, b_{n,i+1} = exp(-90 b^{-(n+1)})/2 * b, the derived c_n, and
/// d_n found by monotone search. Values beyond floating range carry
/// saturation flags; monotone decrease is asserted where representable.
RankTwoBounds rank_two_bounds(int n);

struct RankTwoRun {
    std::string group;
    uint64_t seed = 0;
    long long prime = 0;
    int n = 0;  // log_p of the part order
    std::vector<StageInfo> stages;
    bool success = false;
    int failed_stage = -1;
    std::string note;
    RankTwoBounds bounds;  // the reference constant schedule, reporting only
};

struct RankTwoOutcome {
    std::optional<TightPair> pair;  // engaged only when verified
    RankTwoRun run;
};

/// Randomized clustered-diagram pipeline on a rank-two p-part (odd p):
/// stage i samples D_i^{T_{i+1}} until the clusteredness threshold holds,
/// then (A, T) = (D_{n+1} \ D_n, D_n) is checked to be a weak generating
/// scheme and the pair (r_stabilize(A u T) \ T, J[A u T]) is verified.
/// Cyclic parts delegate to cyclic_part. Any returned pair is verified.
RankTwoOutcome rank_two_tight_pair(const Context& ctx, const RankTwoOptions& opts = {});

/// Same pipeline scoped below the Sylow subgroup of one prime of a larger
/// context; the returned pair is verified on that interval only.
RankTwoOutcome rank_two_part(const Context& ctx, int prime_index,
                             const RankTwoOptions& opts = {});

/// Builds one part per prime of the context (cyclic or rank-two pipeline) and
/// glues them; throws when a part admits no construction.
TightPair auto_tight_pair(const Context& ctx, const RankTwoOptions& opts = {});

struct PartitionStructure {
    int k = -1, chi = -1, h = -1;
    std::vector<int> fiber;     // X = I_K^H(chi), char indices at H
    std::vector<int> interval;  // L ids in (K, H]
    std::vector<char> in_s_chi;
    // parts[j]: blocks of P_{interval[j]}, each block sorted, blocks sorted.
    std::vector<std::vector<std::vector<int>>> parts;
};

/// Partitions of the induced fiber by conjugate restriction, for K maximal in
/// the (odd-order) top subgroup. Throws on even order or non-maximal K.
PartitionStructure partition_structure(const Context& ctx, int k, int chi, int h = -1);

/// Verifies the six structural claims; returns "" when all hold.
std::string check_partition_claims(const Context& ctx, const PartitionStructure& ps);

}  // namespace satlab
