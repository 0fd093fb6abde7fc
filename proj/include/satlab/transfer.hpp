#pragma once

#include <functional>
#include <optional>

#include "satlab/group.hpp"

namespace satlab {

/// A reflexive-transitive relation on subgroup ids refining <=, closed under
/// pullback. rel(k, h) reads "K -> H is a transfer".
struct TransferSystem {
    int n = 0;
    std::vector<uint8_t> m;  // n*n, row k, column h

    TransferSystem() = default;
    explicit TransferSystem(int size) : n(size), m(static_cast<size_t>(size) * size, 0) {
        for (int i = 0; i < n; ++i) set_rel(i, i, true);
    }
    bool rel(int k, int h) const { return m[static_cast<size_t>(k) * n + h] != 0; }
    void set_rel(int k, int h, bool v) { m[static_cast<size_t>(k) * n + h] = v ? 1 : 0; }
    std::vector<std::pair<int, int>> strict_edges() const;
    friend bool operator==(const TransferSystem& a, const TransferSystem& b) {
        return a.n == b.n && a.m == b.m;
    }
    friend bool operator!=(const TransferSystem& a, const TransferSystem& b) { return !(a == b); }
    /// Containment as relation sets.
    bool subset_of(const TransferSystem& other) const;
};

TransferSystem identity_system(const SubgroupLattice& lat);
TransferSystem maximal_system(const SubgroupLattice& lat);

struct TsValidation {
    bool ok = true;
    std::string axiom;    // first violated axiom, for reports
    std::string message;  // witnesses
};

TsValidation validate_transfer_system(const SubgroupLattice& lat, const TransferSystem& ts);
bool is_saturated(const SubgroupLattice& lat, const TransferSystem& ts);

/// Least valid transfer system containing the edges (transitive + pullback
/// fixed point). Edges must satisfy K <= H.
TransferSystem generate_transfer_system(const SubgroupLattice& lat,
                                        const std::vector<std::pair<int, int>>& edges);
/// Least saturated valid transfer system containing the edges.
TransferSystem generate_saturated(const SubgroupLattice& lat,
                                  const std::vector<std::pair<int, int>>& edges);

std::vector<int> cofibrant_subgroups(const SubgroupLattice& lat, const TransferSystem& ts);
std::vector<int> fibrant_subgroups(const SubgroupLattice& lat, const TransferSystem& ts);

struct TsLeqResult {
    bool subset;          // R included in R' as relations
    bool cofibrant_test;  // every R'-cofibrant subgroup is R-cofibrant
};
/// Requires R' saturated (throws otherwise). The two fields must agree.
TsLeqResult leq_of_transfer_systems(const SubgroupLattice& lat, const TransferSystem& r,
                                    const TransferSystem& r_saturated);

/// DFS over subsets of strict <=-pairs with closure pruning; visits every
/// valid transfer system exactly once, in a deterministic order. Requires at
/// most `max_subgroups` subgroups (and at most 64). Stop early by returning
/// false from the visitor.
void enumerate_transfer_systems(const SubgroupLattice& lat, int max_subgroups,
                                const std::function<bool(const TransferSystem&)>& visit);
uint64_t count_transfer_systems(const SubgroupLattice& lat, int max_subgroups = 12);

/// Monotone, decreasing, idempotent endomap of the subgroup lattice.
struct InteriorOperator {
    std::vector<int> f;
    friend bool operator==(const InteriorOperator& a, const InteriorOperator& b) {
        return a.f == b.f;
    }
};

bool is_interior_operator(const SubgroupLattice& lat, const InteriorOperator& op);
/// Correspondence: K -> H in R  iff  f(H) <= K <= H.
TransferSystem interior_to_saturated(const SubgroupLattice& lat, const InteriorOperator& op);
InteriorOperator saturated_to_interior(const SubgroupLattice& lat, const TransferSystem& ts);
/// f_S(H) = join of the members of S below H.
InteriorOperator interior_from_layer(const SubgroupLattice& lat, const std::vector<int>& s);

void enumerate_interior_operators(const SubgroupLattice& lat,
                                  const std::function<bool(const InteriorOperator&)>& visit);
void enumerate_saturated(const SubgroupLattice& lat,
                         const std::function<bool(const TransferSystem&)>& visit);
uint64_t count_saturated(const SubgroupLattice& lat);

}  // namespace satlab
