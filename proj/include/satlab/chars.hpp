#pragma once

#include <boost/dynamic_bitset.hpp>

#include "satlab/group.hpp"

namespace satlab {

/// Subset of the character group of one subgroup, as a bitset over the
/// canonical enumeration of that subgroup's characters.
struct CharSet {
    int subgroup = -1;
    boost::dynamic_bitset<> bits;

    size_t count() const { return bits.count(); }
    bool none() const { return bits.none(); }
    bool test(size_t i) const { return bits.test(i); }
    friend bool operator==(const CharSet& a, const CharSet& b) {
        return a.subgroup == b.subgroup && a.bits == b.bits;
    }
    friend bool operator!=(const CharSet& a, const CharSet& b) { return !(a == b); }
};

/// A group together with its subgroup lattice and character tables.
///
/// Characters of H are cosets of Ann(H) in the dual of G (which is again a
/// product of cyclic groups with the same orders); the canonical coset
/// representative is the lexicographically least member, and characters of H
/// are indexed in representative order, so index 0 is always the trivial
/// character. Restriction along K <= H is coset enlargement, computed by a
/// table lookup. All data is immutable after construction.
class Context {
public:
    explicit Context(GroupSpec spec, long long element_budget = 10000);

    const GroupSpec& spec() const { return lat_.spec(); }
    const SubgroupLattice& lat() const { return lat_; }
    int num_subgroups() const { return lat_.size(); }
    int top() const { return lat_.top(); }
    int bottom() const { return lat_.bottom(); }

    int nchars(int h) const { return static_cast<int>(reps_[h].size()); }
    /// Character index at H of the coset containing the raw dual element.
    int char_from_raw(int h, int raw) const { return idx_from_raw_[h][raw]; }
    /// Canonical representative of character i at H, as a raw dual index.
    int char_rep_raw(int h, int i) const { return reps_[h][i]; }
    Element char_rep(int h, int i) const { return lat_.decode(reps_[h][i]); }

    /// Restriction of character i at H to K <= H.
    int restrict_char(int h, int i, int k) const;
    int conj_char(int h, int i) const { return conj_[h][i]; }
    bool is_self_conj(int h, int i) const { return conj_[h][i] == i; }

    CharSet empty_at(int h) const;
    CharSet full_at(int h) const;
    CharSet singleton(int h, int i) const;

    CharSet restrict_set(const CharSet& s, int k) const;
    CharSet induce_set(const CharSet& s, int h) const;
    CharSet conjugate_set(const CharSet& s) const;
    CharSet conj_close(const CharSet& s) const;
    bool is_conj_invariant(const CharSet& s) const;
    /// Contains the trivial character and is conjugation-closed.
    bool is_universe(const CharSet& s) const;

    /// Exact pairing <a, x> as a residue mod exponent (0 means trivial value).
    long long pairing(int raw_char, int raw_elem) const;
    /// Kernel of character i at H, as a subgroup id.
    int kernel_of(int h, int i) const;

private:
    SubgroupLattice lat_;
    long long exp_ = 1;
    std::vector<long long> pair_scale_;        // exponent / d_i per coordinate
    std::vector<std::vector<int>> reps_;       // reps_[h][i] = canonical raw rep
    std::vector<std::vector<int>> idx_from_raw_;
    std::vector<std::vector<int>> conj_;
};

}  // namespace satlab
