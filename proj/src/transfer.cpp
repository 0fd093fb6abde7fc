#include "satlab/transfer.hpp"

#include <algorithm>
#include <bit>

namespace satlab {

std::vector<std::pair<int, int>> TransferSystem::strict_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (k != h && rel(k, h)) out.emplace_back(k, h);
    return out;
}

bool TransferSystem::subset_of(const TransferSystem& other) const {
    if (n != other.n) return false;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] && !other.m[i]) return false;
    return true;
}

TransferSystem identity_system(const SubgroupLattice& lat) { return TransferSystem(lat.size()); }

TransferSystem maximal_system(const SubgroupLattice& lat) {
    TransferSystem ts(lat.size());
    for (auto [k, h] : lat.strict_pairs()) ts.set_rel(k, h, true);
    return ts;
}

TsValidation validate_transfer_system(const SubgroupLattice& lat, const TransferSystem& ts) {
    TsValidation v;
    auto fail = [&](const std::string& axiom, const std::string& msg) {
        v.ok = false;
        v.axiom = axiom;
        v.message = msg;
        return v;
    };
    const int n = lat.size();
    if (ts.n != n) return fail("shape", "matrix size does not match lattice");
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (ts.rel(k, h) && !lat.leq(k, h))
                return fail("refinement", "edge " + std::to_string(k) + "->" + std::to_string(h) +
                                              " not below inclusion");
    for (int k = 0; k < n; ++k)
        if (!ts.rel(k, k)) return fail("reflexivity", "missing " + std::to_string(k));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (ts.rel(k, l))
                for (int h = 0; h < n; ++h)
                    if (ts.rel(l, h) && !ts.rel(k, h))
                        return fail("transitivity", std::to_string(k) + "->" + std::to_string(l) +
                                                        "->" + std::to_string(h));
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (ts.rel(k, h))
                for (int l : lat.below(h))
                    if (!ts.rel(lat.meet(k, l), l))
                        return fail("pullback", std::to_string(k) + "->" + std::to_string(h) +
                                                    " with L=" + std::to_string(l));
    return v;
}

bool is_saturated(const SubgroupLattice& lat, const TransferSystem& ts) {
    const int n = lat.size();
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (ts.rel(k, h))
                for (int l = 0; l < n; ++l)
                    if (lat.leq(k, l) && lat.leq(l, h) && !ts.rel(l, h)) return false;
    return true;
}

namespace {

TransferSystem closure(const SubgroupLattice& lat, const std::vector<std::pair<int, int>>& edges,
                       bool saturate) {
    const int n = lat.size();
    TransferSystem ts(n);
    for (auto [k, h] : edges) {
        if (k < 0 || h < 0 || k >= n || h >= n || !lat.leq(k, h))
            throw std::invalid_argument("malformed edge " + std::to_string(k) + "->" +
                                        std::to_string(h));
        ts.set_rel(k, h, true);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) {
                if (!ts.rel(k, h)) continue;
                for (int l = 0; l < n; ++l)
                    if (ts.rel(h, l) && !ts.rel(k, l)) {
                        ts.set_rel(k, l, true);
                        changed = true;
                    }
                for (int l : lat.below(h)) {
                    int kl = lat.meet(k, l);
                    if (!ts.rel(kl, l)) {
                        ts.set_rel(kl, l, true);
                        changed = true;
                    }
                }
                if (saturate)
                    for (int l = 0; l < n; ++l)
                        if (lat.leq(k, l) && lat.leq(l, h) && !ts.rel(l, h)) {
                            ts.set_rel(l, h, true);
                            changed = true;
                        }
            }
    }
    return ts;
}

}  // namespace

TransferSystem generate_transfer_system(const SubgroupLattice& lat,
                                        const std::vector<std::pair<int, int>>& edges) {
    return closure(lat, edges, false);
}

TransferSystem generate_saturated(const SubgroupLattice& lat,
                                  const std::vector<std::pair<int, int>>& edges) {
    return closure(lat, edges, true);
}

std::vector<int> cofibrant_subgroups(const SubgroupLattice& lat, const TransferSystem& ts) {
    std::vector<int> out;
    for (int h = 0; h < lat.size(); ++h) {
        bool cof = true;
        for (int k : lat.below(h))
            if (k != h && ts.rel(k, h)) {
                cof = false;
                break;
            }
        if (cof) out.push_back(h);
    }
    return out;
}

std::vector<int> fibrant_subgroups(const SubgroupLattice& lat, const TransferSystem& ts) {
    std::vector<int> out;
    for (int h = 0; h < lat.size(); ++h)
        if (ts.rel(h, lat.top())) out.push_back(h);
    return out;
}

TsLeqResult leq_of_transfer_systems(const SubgroupLattice& lat, const TransferSystem& r,
                                    const TransferSystem& r_saturated) {
    if (!is_saturated(lat, r_saturated))
        throw std::invalid_argument("leq_of_transfer_systems: R' is not saturated");
    TsLeqResult out{};
    out.subset = r.subset_of(r_saturated);
    auto cof_r = cofibrant_subgroups(lat, r);
    auto cof_rp = cofibrant_subgroups(lat, r_saturated);
    out.cofibrant_test = std::includes(cof_r.begin(), cof_r.end(), cof_rp.begin(), cof_rp.end());
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration of all transfer systems: DFS over the strict <=-pairs in
// canonical order. The partial state keeps the closure of the included pairs
// as uint64 out-edge rows; a branch dies as soon as the closure forces a pair
// that was already excluded.

namespace {

struct TsEnum {
    const SubgroupLattice& lat;
    int n;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<int>> pair_idx;  // [k][h] -> index into pairs, or -1
    std::vector<uint64_t> below_mask;
    const std::function<bool(const TransferSystem&)>& visit;
    std::vector<uint8_t> excluded;  // per pair index
    bool stopped = false;

    TsEnum(const SubgroupLattice& l, const std::function<bool(const TransferSystem&)>& v)
        : lat(l), n(l.size()), visit(v) {
        pairs = lat.strict_pairs();
        std::sort(pairs.begin(), pairs.end());
        pair_idx.assign(n, std::vector<int>(n, -1));
        for (size_t i = 0; i < pairs.size(); ++i)
            pair_idx[pairs[i].first][pairs[i].second] = static_cast<int>(i);
        below_mask.assign(n, 0);
        for (int h = 0; h < n; ++h)
            for (int k : lat.below(h)) below_mask[h] |= 1ull << k;
        excluded.assign(pairs.size(), 0);
    }

    // Adds edge (k,h) to rows and closes under transitivity + pullback.
    // Returns false if a forced pair is currently excluded.
    bool close_with(std::vector<uint64_t>& out_rows, int k0, int h0) {
        std::vector<std::pair<int, int>> work{{k0, h0}};
        while (!work.empty()) {
            auto [k, h] = work.back();
            work.pop_back();
            if (out_rows[k] & (1ull << h)) continue;
            if (k != h) {
                int pi = pair_idx[k][h];
                if (pi >= 0 && excluded[pi]) return false;
            }
            out_rows[k] |= 1ull << h;
            // transitivity: k -> h -> l and j -> k -> h
            uint64_t succ = out_rows[h] & ~out_rows[k];
            while (succ) {
                int l = std::countr_zero(succ);
                succ &= succ - 1;
                work.emplace_back(k, l);
            }
            for (int j = 0; j < n; ++j)
                if ((out_rows[j] >> k) & 1ull && !((out_rows[j] >> h) & 1ull))
                    work.emplace_back(j, h);
            // pullback: l <= h forces meet(k,l) -> l
            uint64_t bel = below_mask[h];
            while (bel) {
                int l = std::countr_zero(bel);
                bel &= bel - 1;
                int kl = lat.meet(k, l);
                if (!((out_rows[kl] >> l) & 1ull)) work.emplace_back(kl, l);
            }
        }
        return true;
    }

    void rec(size_t i, std::vector<uint64_t>& rows) {
        if (stopped) return;
        if (i == pairs.size()) {
            TransferSystem ts(n);
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h)
                    if ((rows[k] >> h) & 1ull) ts.set_rel(k, h, true);
            if (!visit(ts)) stopped = true;
            return;
        }
        auto [k, h] = pairs[i];
        if ((rows[k] >> h) & 1ull) {
            rec(i + 1, rows);  // already forced in
            return;
        }
        // branch 1: exclude
        excluded[i] = 1;
        rec(i + 1, rows);
        excluded[i] = 0;
        if (stopped) return;
        // branch 2: include
        std::vector<uint64_t> copy = rows;
        if (close_with(copy, k, h)) rec(i + 1, copy);
    }

    void run() {
        std::vector<uint64_t> rows(n, 0);
        for (int i = 0; i < n; ++i) rows[i] = 1ull << i;
        rec(0, rows);
    }
};

}  // namespace

void enumerate_transfer_systems(const SubgroupLattice& lat, int max_subgroups,
                                const std::function<bool(const TransferSystem&)>& visit) {
    if (lat.size() > max_subgroups)
        throw BudgetError("transfer-system enumeration budget: " + std::to_string(lat.size()) +
                          " subgroups > " + std::to_string(max_subgroups));
    if (lat.size() > 64)
        throw BudgetError("transfer-system enumeration supports at most 64 subgroups");
    TsEnum e(lat, visit);
    e.run();
}

uint64_t count_transfer_systems(const SubgroupLattice& lat, int max_subgroups) {
    uint64_t c = 0;
    enumerate_transfer_systems(lat, max_subgroups, [&](const TransferSystem&) {
        ++c;
        return true;
    });
    return c;
}

// ---------------------------------------------------------------------------
// Interior operators and saturated transfer systems.

bool is_interior_operator(const SubgroupLattice& lat, const InteriorOperator& op) {
    const int n = lat.size();
    if (static_cast<int>(op.f.size()) != n) return false;
    for (int h = 0; h < n; ++h) {
        int v = op.f[h];
        if (v < 0 || v >= n) return false;
        if (!lat.leq(v, h)) return false;   // decreasing
        if (op.f[v] != v) return false;     // idempotent
    }
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (lat.leq(k, h) && !lat.leq(op.f[k], op.f[h])) return false;  // monotone
    return true;
}

TransferSystem interior_to_saturated(const SubgroupLattice& lat, const InteriorOperator& op) {
    if (!is_interior_operator(lat, op))
        throw std::invalid_argument("interior_to_saturated: not an interior operator");
    TransferSystem ts(lat.size());
    for (int h = 0; h < lat.size(); ++h)
        for (int k : lat.below(h))
            if (lat.leq(op.f[h], k)) ts.set_rel(k, h, true);
    return ts;
}

InteriorOperator saturated_to_interior(const SubgroupLattice& lat, const TransferSystem& ts) {
    if (!is_saturated(lat, ts))
        throw std::invalid_argument("saturated_to_interior: system is not saturated");
    InteriorOperator op;
    op.f.resize(lat.size());
    for (int h = 0; h < lat.size(); ++h) {
        int v = h;
        for (int k : lat.below(h))
            if (ts.rel(k, h)) v = lat.meet(v, k);
        op.f[h] = v;
    }
    return op;
}

InteriorOperator interior_from_layer(const SubgroupLattice& lat, const std::vector<int>& s) {
    InteriorOperator op;
    op.f.resize(lat.size());
    for (int h = 0; h < lat.size(); ++h) {
        int v = lat.bottom();
        for (int k : s)
            if (lat.leq(k, h)) v = lat.join(v, k);
        op.f[h] = v;
    }
    if (!is_interior_operator(lat, op))
        throw std::logic_error("interior_from_layer produced a non-interior operator");
    return op;
}

namespace {

struct InteriorEnum {
    const SubgroupLattice& lat;
    int n;
    const std::function<bool(const InteriorOperator&)>& visit;
    std::vector<int> f;
    bool stopped = false;

    InteriorEnum(const SubgroupLattice& l, const std::function<bool(const InteriorOperator&)>& v)
        : lat(l), n(l.size()), visit(v), f(l.size(), -1) {}

    // Subgroup ids ascend by order, so id order is a linear extension of <=;
    // every constraint on f(h) involves only smaller ids.
    void rec(int h) {
        if (stopped) return;
        if (h == n) {
            InteriorOperator op{f};
            if (!visit(op)) stopped = true;
            return;
        }
        int lo = lat.bottom();
        for (int k : lat.below(h))
            if (k != h) lo = lat.join(lo, f[k]);  // monotonicity lower bound
        for (int k : lat.below(h)) {
            if (!lat.leq(lo, k)) continue;
            if (k != h && f[k] != k) continue;  // image must be a fixed point
            f[h] = k;
            rec(h + 1);
            f[h] = -1;
            if (stopped) return;
        }
    }
};

}  // namespace

void enumerate_interior_operators(const SubgroupLattice& lat,
                                  const std::function<bool(const InteriorOperator&)>& visit) {
    InteriorEnum e(lat, visit);
    e.rec(0);
}

void enumerate_saturated(const SubgroupLattice& lat,
                         const std::function<bool(const TransferSystem&)>& visit) {
    enumerate_interior_operators(
        lat, [&](const InteriorOperator& op) { return visit(interior_to_saturated(lat, op)); });
}

uint64_t count_saturated(const SubgroupLattice& lat) {
    uint64_t c = 0;
    enumerate_interior_operators(lat, [&](const InteriorOperator&) {
        ++c;
        return true;
    });
    return c;
}

}  // namespace satlab
