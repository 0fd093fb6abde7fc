#pragma once

#include "satlab/engine.hpp"

namespace satlab {

/// Conjugation orbits of the nontrivial characters at the top level, sorted
/// by least member; universes correspond bijectively to orbit subsets.
struct OrbitIndex {
    std::vector<std::vector<int>> orbits;
    int count() const { return static_cast<int>(orbits.size()); }
};

OrbitIndex orbit_index(const Context& ctx);

/// The universe for an orbit-subset mask: trivial character plus the selected
/// orbits.
CharSet universe_from_mask(const Context& ctx, const OrbitIndex& oi, uint64_t mask);

enum class BruteKind { Witness, Unrealizable, BudgetExceeded };

struct BruteForceResult {
    BruteKind kind = BruteKind::BudgetExceeded;
    CharSet witness;           // engaged for Witness
    uint64_t witness_mask = 0;
    uint64_t checked = 0;
    uint64_t total = 0;
};

/// Scans all orbit-subset universes in ascending mask order and returns the
/// lex-first U with Tr(U) == R. Deterministic for any worker count.
BruteForceResult brute_force_realizable(const Context& ctx, const TransferSystem& r,
                                        int max_orbits = 22, int jobs = 1);

struct NegativeReport {
    long long p = 0;
    std::string group;
    int plane = -1;
    bool explicit_form_ok = false;  // R matches: W' -> W iff W'=W or W <= plane
    bool unrealizable = false;
    uint64_t universes = 0;
    double seconds = 0;
};

/// Builds the saturated system generated by 0 -> (plane) on (C_p)^3 and
/// exhausts all universes; the expected outcome is Unrealizable.
NegativeReport verify_negative_rank3(long long p, int jobs = 1);

struct CoveringStats {
    long long p = 0;
    int plane = -1;
    std::vector<int> lines;               // ids of the lines off the plane
    std::vector<int> xi;                  // chosen character index per line
    std::vector<int> cover_index;         // c(tau) per character at the top
    std::vector<long long> fiber_sums;    // per chi at the plane; all p^2
    std::vector<long long> variance_num;  // V(chi) = variance_num[chi] / p
    bool identities_ok = false;
    std::string failure;
};

/// Covering-index statistics for one choice vector xi; asserts the exact
/// identities (fiber sums p^2, mean variance p-1, pairwise meets p).
CoveringStats covering_stats(const Context& ctx, int plane, const std::vector<int>& xi);

/// Gaussian binomial: number of subgroups of order p^i in (C_p)^n.
long long p_binomial(int n, int i, long long p);

struct CensusBudget {
    int max_subgroups_enum = 20;
    int max_orbits = 22;
    int jobs = 1;
};

struct CensusRow {
    std::string group;
    uint64_t transfer_systems = 0;
    uint64_t saturated = 0;
    int orbit_count = 0;
    uint64_t universes = 0;  // 2^orbit_count
    uint64_t realized_saturated = 0;
    uint64_t unrealized_saturated = 0;
};

/// Full census by enumeration plus brute force. Checks the layer lower bound
/// 2^binom(n,i)_p on elementary Abelian groups and the orbit-count identity.
CensusRow census(const Context& ctx, const CensusBudget& budget = {});

std::string census_csv_header();
std::string census_csv_row(const CensusRow& row);

}  // namespace satlab
