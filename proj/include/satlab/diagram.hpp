#pragma once

#include "satlab/chars.hpp"

namespace satlab {

/// Assignment of a character subset to every subgroup.
struct Diagram {
    std::vector<CharSet> values;  // indexed by subgroup id

    const CharSet& at(int h) const { return values.at(h); }
    CharSet& at(int h) { return values.at(h); }
    friend bool operator==(const Diagram& a, const Diagram& b) { return a.values == b.values; }
    friend bool operator!=(const Diagram& a, const Diagram& b) { return !(a == b); }
    /// Pointwise containment.
    bool subset_of(const Diagram& other) const;
    size_t total_count() const;
};

Diagram empty_diagram(const Context& ctx);
Diagram union_diagrams(const Diagram& a, const Diagram& b);
/// Pointwise set difference a \ b.
Diagram minus_diagrams(const Diagram& a, const Diagram& b);

bool is_gal_invariant(const Context& ctx, const Diagram& d);
/// Every value contains the trivial character and is conjugation-closed.
bool is_universal(const Context& ctx, const Diagram& d);
/// R_K^H(D(H)) subset of D(K) for all K <= H.
bool is_r_stable(const Context& ctx, const Diagram& d);

/// Least R-stable diagram containing d:  H |-> union over K >= H of R_H^K(D(K)).
Diagram r_stabilize(const Context& ctx, const Diagram& d);

/// The diagram D_U(H) = restrict_set(U, H) of a set U at level G.
Diagram restriction_diagram(const Context& ctx, const CharSet& u);

}  // namespace satlab
