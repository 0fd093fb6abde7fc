#include "satlab/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <thread>

namespace satlab {

OrbitIndex orbit_index(const Context& ctx) {
    OrbitIndex oi;
    int g = ctx.top();
    std::vector<char> seen(ctx.nchars(g), 0);
    seen[0] = 1;  // trivial character belongs to every universe
    for (int i = 1; i < ctx.nchars(g); ++i) {
        if (seen[i]) continue;
        int c = ctx.conj_char(g, i);
        seen[i] = 1;
        std::vector<int> orbit{i};
        if (c != i) {
            seen[c] = 1;
            orbit.push_back(c);
        }
        std::sort(orbit.begin(), orbit.end());
        oi.orbits.push_back(std::move(orbit));
    }
    std::sort(oi.orbits.begin(), oi.orbits.end());
    return oi;
}

CharSet universe_from_mask(const Context& ctx, const OrbitIndex& oi, uint64_t mask) {
    CharSet u = ctx.empty_at(ctx.top());
    u.bits.set(0);
    for (int b = 0; b < oi.count(); ++b)
        if ((mask >> b) & 1ull)
            for (int i : oi.orbits[b]) u.bits.set(i);
    return u;
}

namespace {

// Precomputed tables driving the fast Tr(U) == R test. Requires every
// character group below the top to fit in 64 bits.
struct TrChecker {
    const Context& ctx;
    int n;
    std::vector<uint64_t> orbit_restr;  // [orbit * n + level]: restriction mask
    std::vector<uint64_t> trivial_restr;
    // Strict pairs in cheap-first order with the expected relation bit.
    struct Pair {
        int k, h;
        bool expected;
        int fiber_base;  // into fibers: nchars(k) masks over H-chars
    };
    std::vector<Pair> pairs;
    std::vector<uint64_t> fibers;
    bool fits = true;

    TrChecker(const Context& c, const OrbitIndex& oi, const TransferSystem& r) : ctx(c) {
        n = ctx.num_subgroups();
        for (int h = 0; h < n; ++h)
            if (ctx.nchars(h) > 64) {
                fits = false;
                return;
            }
        int g = ctx.top();
        orbit_restr.assign(static_cast<size_t>(oi.count()) * n, 0);
        trivial_restr.assign(n, 0);
        for (int h = 0; h < n; ++h) {
            trivial_restr[h] = 1ull;  // trivial restricts to trivial
            for (int b = 0; b < oi.count(); ++b) {
                uint64_t m = 0;
                for (int i : oi.orbits[b]) m |= 1ull << ctx.restrict_char(g, i, h);
                orbit_restr[static_cast<size_t>(b) * n + h] = m;
            }
        }
        for (auto [k, h] : ctx.lat().strict_pairs()) {
            Pair p;
            p.k = k;
            p.h = h;
            p.expected = r.rel(k, h);
            p.fiber_base = static_cast<int>(fibers.size());
            for (int chi = 0; chi < ctx.nchars(k); ++chi) {
                uint64_t m = 0;
                for (int t = 0; t < ctx.nchars(h); ++t)
                    if (ctx.restrict_char(h, t, k) == chi) m |= 1ull << t;
                fibers.push_back(m);
            }
            pairs.push_back(p);
        }
        std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
            long long ca = ctx.lat().at(a.h).order, cb = ctx.lat().at(b.h).order;
            if (ca != cb) return ca < cb;
            return std::make_pair(a.k, a.h) < std::make_pair(b.k, b.h);
        });
    }

    bool matches(uint64_t mask, std::vector<uint64_t>& level) const {
        for (int h = 0; h < n; ++h) level[h] = trivial_restr[h];
        uint64_t mm = mask;
        while (mm) {
            int b = std::countr_zero(mm);
            mm &= mm - 1;
            const uint64_t* row = &orbit_restr[static_cast<size_t>(b) * n];
            for (int h = 0; h < n; ++h) level[h] |= row[h];
        }
        for (const Pair& p : pairs) {
            uint64_t uk = level[p.k], uh = level[p.h];
            bool contained = true;
            uint64_t bits = uk;
            while (bits) {
                int chi = std::countr_zero(bits);
                bits &= bits - 1;
                if (fibers[p.fiber_base + chi] & ~uh) {
                    contained = false;
                    break;
                }
            }
            if (contained != p.expected) return false;
        }
        return true;
    }
};

// Generic fallback for character groups wider than 64 bits.
bool tr_equals(const Context& ctx, const CharSet& u, const TransferSystem& r) {
    Diagram d = restriction_diagram(ctx, u);
    return tr_of_diagram(ctx, d) == r;
}

}  // namespace

BruteForceResult brute_force_realizable(const Context& ctx, const TransferSystem& r,
                                        int max_orbits, int jobs) {
    OrbitIndex oi = orbit_index(ctx);
    BruteForceResult res;
    if (oi.count() > max_orbits) {
        res.kind = BruteKind::BudgetExceeded;
        res.total = 0;
        return res;
    }
    uint64_t total = 1ull << oi.count();
    res.total = total;

    TrChecker checker(ctx, oi, r);
    jobs = std::max(1, jobs);
    uint64_t found = UINT64_MAX;

    if (jobs == 1) {
        std::vector<uint64_t> level(ctx.num_subgroups());
        for (uint64_t mask = 0; mask < total; ++mask) {
            bool hit = checker.fits ? checker.matches(mask, level)
                                    : tr_equals(ctx, universe_from_mask(ctx, oi, mask), r);
            ++res.checked;
            if (hit) {
                found = mask;
                break;
            }
        }
    } else {
        std::vector<std::thread> workers;
        std::vector<uint64_t> local_first(jobs, UINT64_MAX);
        std::vector<uint64_t> local_checked(jobs, 0);
        uint64_t chunk = (total + jobs - 1) / jobs;
        std::atomic<uint64_t> best{UINT64_MAX};
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w]() {
                uint64_t lo = std::min<uint64_t>(total, static_cast<uint64_t>(w) * chunk);
                uint64_t hi = std::min<uint64_t>(total, lo + chunk);
                std::vector<uint64_t> level(ctx.num_subgroups());
                for (uint64_t mask = lo; mask < hi; ++mask) {
                    if (best.load(std::memory_order_relaxed) < lo) return;  // earlier chunk won
                    bool hit = checker.fits
                                   ? checker.matches(mask, level)
                                   : tr_equals(ctx, universe_from_mask(ctx, oi, mask), r);
                    ++local_checked[w];
                    if (hit) {
                        local_first[w] = mask;
                        uint64_t cur = best.load();
                        while (mask < cur && !best.compare_exchange_weak(cur, mask)) {
                        }
                        return;
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        for (int w = 0; w < jobs; ++w) {
            res.checked += local_checked[w];
            found = std::min(found, local_first[w]);
        }
    }

    if (found == UINT64_MAX) {
        res.kind = BruteKind::Unrealizable;
    } else {
        res.kind = BruteKind::Witness;
        res.witness_mask = found;
        res.witness = universe_from_mask(ctx, oi, found);
    }
    return res;
}

NegativeReport verify_negative_rank3(long long p, int jobs) {
    NegativeReport rep;
    rep.p = p;
    std::string spec = "C" + std::to_string(p) + "xC" + std::to_string(p) + "xC" +
                       std::to_string(p);
    rep.group = spec;
    Context ctx(parse_group(spec));
    const auto& lat = ctx.lat();

    // The plane spanned by the first two coordinates.
    std::vector<int> plane_elems;
    for (int raw = 0; raw < lat.num_elements(); ++raw)
        if (lat.decode(raw).back() == 0) plane_elems.push_back(raw);
    rep.plane = lat.id_of_elements(plane_elems);
    if (rep.plane < 0) throw std::logic_error("verify_negative_rank3: plane not found");

    TransferSystem r = generate_saturated(lat, {{lat.bottom(), rep.plane}});
    rep.explicit_form_ok = true;
    for (auto [k, h] : lat.strict_pairs())
        if (r.rel(k, h) != lat.leq(h, rep.plane)) rep.explicit_form_ok = false;

    auto t0 = std::chrono::steady_clock::now();
    BruteForceResult b = brute_force_realizable(ctx, r, 22, jobs);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (b.kind == BruteKind::BudgetExceeded)
        throw BudgetError("verify_negative_rank3: universe budget exceeded");
    rep.universes = b.total;
    rep.unrealizable = (b.kind == BruteKind::Unrealizable);
    return rep;
}

CoveringStats covering_stats(const Context& ctx, int plane, const std::vector<int>& xi) {
    const auto& lat = ctx.lat();
    CoveringStats st;
    st.plane = plane;
    if (lat.num_primes() != 1 || lat.spec().p_rank(lat.prime(0)) != 3 ||
        lat.at(ctx.top()).order != lat.prime(0) * lat.prime(0) * lat.prime(0))
        throw std::invalid_argument("covering_stats: context must be (C_p)^3");
    long long p = lat.prime(0);
    st.p = p;
    if (lat.at(plane).order != p * p)
        throw std::invalid_argument("covering_stats: subgroup is not a plane");

    for (int h = 0; h < lat.size(); ++h)
        if (lat.at(h).order == p && !lat.leq(h, plane)) st.lines.push_back(h);
    if (static_cast<long long>(st.lines.size()) != p * p)
        throw std::logic_error("covering_stats: line count is not p^2");
    if (xi.size() != st.lines.size())
        throw std::invalid_argument("covering_stats: need one choice per line");
    st.xi = xi;

    int g = ctx.top();
    st.cover_index.assign(ctx.nchars(g), 0);
    for (size_t li = 0; li < st.lines.size(); ++li) {
        int l = st.lines[li];
        if (xi[li] < 0 || xi[li] >= ctx.nchars(l))
            throw std::invalid_argument("covering_stats: choice out of range");
        for (int t = 0; t < ctx.nchars(g); ++t)
            if (ctx.restrict_char(g, t, l) == xi[li]) ++st.cover_index[t];
    }

    auto fail = [&](const std::string& why) {
        st.identities_ok = false;
        st.failure = why;
        return st;
    };

    // |X_L meet X_L'| = p for distinct lines
    for (size_t a = 0; a < st.lines.size(); ++a)
        for (size_t b = a + 1; b < st.lines.size(); ++b) {
            long long inter = 0;
            for (int t = 0; t < ctx.nchars(g); ++t)
                if (ctx.restrict_char(g, t, st.lines[a]) == xi[a] &&
                    ctx.restrict_char(g, t, st.lines[b]) == xi[b])
                    ++inter;
            if (inter != p) return fail("pairwise fiber meet is not p");
        }

    // fiber sums and variance numerators (V(chi) = variance_num / p exactly)
    st.fiber_sums.assign(ctx.nchars(plane), 0);
    st.variance_num.assign(ctx.nchars(plane), 0);
    std::vector<long long> sq(ctx.nchars(plane), 0);
    for (int t = 0; t < ctx.nchars(g); ++t) {
        int chi = ctx.restrict_char(g, t, plane);
        st.fiber_sums[chi] += st.cover_index[t];
        sq[chi] += static_cast<long long>(st.cover_index[t]) * st.cover_index[t];
    }
    long long sum_v_num = 0;  // sum over chi of p*V(chi)
    for (int chi = 0; chi < ctx.nchars(plane); ++chi) {
        if (st.fiber_sums[chi] != p * p) return fail("fiber sum is not p^2");
        st.variance_num[chi] = -p * p * p + sq[chi];
        sum_v_num += st.variance_num[chi];
    }
    // mean of V over the p^2 fibers equals p - 1 exactly
    if (sum_v_num != p * p * p * (p - 1)) return fail("mean variance is not p-1");
    st.identities_ok = true;
    return st;
}

long long p_binomial(int n, int i, long long p) {
    if (i < 0 || i > n) throw std::invalid_argument("p_binomial: need 0 <= i <= n");
    __int128 num = 1, den = 1;
    auto pow_ll = [&](int e) {
        __int128 r = 1;
        for (int j = 0; j < e; ++j) r *= p;
        return r;
    };
    for (int j = 0; j < i; ++j) {
        num *= pow_ll(n - j) - 1;
        den *= pow_ll(j + 1) - 1;
        if (num > (__int128)1 << 100) throw std::overflow_error("p_binomial overflow");
    }
    if (den == 0 || num % den != 0) throw std::logic_error("p_binomial: inexact division");
    return static_cast<long long>(num / den);
}

CensusRow census(const Context& ctx, const CensusBudget& budget) {
    CensusRow row;
    row.group = to_string(ctx.spec());
    row.transfer_systems = count_transfer_systems(ctx.lat(), budget.max_subgroups_enum);
    row.saturated = count_saturated(ctx.lat());

    OrbitIndex oi = orbit_index(ctx);
    row.orbit_count = oi.count();
    if (oi.count() > budget.max_orbits)
        throw BudgetError("census: universe budget exceeded");
    row.universes = 1ull << oi.count();

    // Layer lower bound on elementary Abelian p-groups.
    if (ctx.lat().num_primes() == 1) {
        long long p = ctx.lat().prime(0);
        int n = ctx.spec().num_factors();
        bool elementary = true;
        for (int d : ctx.spec().orders)
            if (d != p) elementary = false;
        if (elementary) {
            for (int i = 0; i <= n; ++i) {
                long long layer_count = p_binomial(n, i, p);
                uint64_t count = 0;
                long long target = 1;
                for (int j = 0; j < i; ++j) target *= p;
                for (int h = 0; h < ctx.num_subgroups(); ++h)
                    if (ctx.lat().at(h).order == target) ++count;
                if (count != static_cast<uint64_t>(layer_count))
                    throw std::logic_error("census: layer count disagrees with p-binomial");
                if (layer_count < 63 && row.saturated < (1ull << layer_count))
                    throw std::logic_error("census: saturated count below layer lower bound");
            }
        }
    }

    enumerate_saturated(ctx.lat(), [&](const TransferSystem& r) {
        BruteForceResult b = brute_force_realizable(ctx, r, budget.max_orbits, budget.jobs);
        if (b.kind == BruteKind::BudgetExceeded) throw BudgetError("census: budget exceeded");
        if (b.kind == BruteKind::Witness)
            ++row.realized_saturated;
        else
            ++row.unrealized_saturated;
        return true;
    });
    if (row.realized_saturated + row.unrealized_saturated != row.saturated)
        throw std::logic_error("census: saturated counts disagree");
    return row;
}

std::string census_csv_header() {
    return "group,transfer_systems,saturated,universes,realized_saturated,unrealized_saturated";
}

std::string census_csv_row(const CensusRow& row) {
    return row.group + "," + std::to_string(row.transfer_systems) + "," +
           std::to_string(row.saturated) + "," + std::to_string(row.universes) + "," +
           std::to_string(row.realized_saturated) + "," +
           std::to_string(row.unrealized_saturated);
}

}  // namespace satlab
