#include "satlab/constructors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

namespace satlab {

namespace {

// Subgroup ids below `top` of the given order, ascending by id.
std::vector<int> layer(const Context& ctx, int top, long long order) {
    std::vector<int> out;
    for (int h : ctx.lat().below(top))
        if (ctx.lat().at(h).order == order) out.push_back(h);
    return out;
}

}  // namespace

PartPair cyclic_part(const Context& ctx, int prime_index) {
    const auto& lat = ctx.lat();
    long long p = lat.prime(prime_index);
    if (p < 5)
        throw std::invalid_argument("cyclic_part: chain construction needs p >= 5, got p=" +
                                    std::to_string(p));
    int syl = lat.sylow(prime_index);
    std::vector<int> chain = lat.below(syl);
    std::sort(chain.begin(), chain.end(),
              [&](int a, int b) { return lat.at(a).order < lat.at(b).order; });
    for (size_t i = 1; i < chain.size(); ++i)
        if (lat.at(chain[i]).order != lat.at(chain[i - 1]).order * p)
            throw std::invalid_argument("cyclic_part: p-part is not cyclic");

    auto j = std::make_shared<SectionInductor>(chain);
    Diagram d = empty_diagram(ctx);
    d.at(chain[0]).bits.set(0);
    for (size_t i = 1; i < chain.size(); ++i) {
        int lo = chain[i - 1], hi = chain[i];
        CharSet res = residue(ctx, *j, hi);
        // tau_i: lex-least member of I(1_{H_{i-1}}) escaping Res_J(H_i)
        int tau = -1;
        for (int t = 0; t < ctx.nchars(hi) && tau < 0; ++t)
            if (ctx.restrict_char(hi, t, lo) == 0 && !res.bits.test(t)) tau = t;
        if (tau < 0) throw std::logic_error("cyclic_part: no eligible tau despite p >= 5");
        d.at(hi).bits.set(0);
        d.at(hi).bits.set(tau);
        d.at(hi).bits.set(ctx.conj_char(hi, tau));
    }
    return PartPair{prime_index, std::move(d), std::move(j)};
}

OwnedTightPair cyclic_tight_pair(long long p, int n) {
    if (n < 1) throw std::invalid_argument("cyclic_tight_pair: n must be >= 1");
    long long order = 1;
    for (int i = 0; i < n; ++i) {
        order *= p;
        if (order > 100000) throw BudgetError("cyclic_tight_pair: p^n too large");
    }
    auto ctx = std::make_shared<Context>(parse_group("C" + std::to_string(order)),
                                         std::max<long long>(order, 10000));
    PartPair part = cyclic_part(*ctx, 0);
    TightPair tp = localize_tight_pairs(*ctx, {part});
    return OwnedTightPair{std::move(ctx), std::move(tp)};
}

int clusteredness(const Context& ctx, const Diagram& d, int top) {
    if (top < 0) top = ctx.top();
    ComplementInductor jd(d);
    int best = INT_MAX;
    for (int h : ctx.lat().below(top))
        for (int k : ctx.lat().below(h)) {
            if (k == h || rank_of_pair(ctx.lat(), k, h) != 1) continue;
            for (int chi = 0; chi < ctx.nchars(k); ++chi) {
                int sz = static_cast<int>(jd.image_char(ctx, k, chi, h).count());
                best = std::min(best, sz);
                if (best == 0) return 0;
            }
        }
    return best;
}

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

Diagram sample_enlargement(const Context& ctx, const Diagram& d, const std::vector<int>& t,
                           std::mt19937_64& rng, int top) {
    if (top < 0) top = ctx.top();
    if (!is_gal_invariant(ctx, d))
        throw std::invalid_argument("sample_enlargement: diagram not Gal-invariant");
    ComplementInductor jd(d);
    Diagram out = d;
    for (int h : t) {
        CharSet pool = jd.image_char(ctx, ctx.bottom(), 0, h);
        pool.bits.reset(0);
        if (pool.none())
            throw std::invalid_argument("sample_enlargement: empty pool at subgroup " +
                                        std::to_string(h) + " (clusteredness < 2)");
        std::vector<int> choices;
        for (size_t i = pool.bits.find_first(); i != boost::dynamic_bitset<>::npos;
             i = pool.bits.find_next(i))
            choices.push_back(static_cast<int>(i));
        int tau = choices[uniform_index(rng, choices.size())];
        out.at(h).bits.set(tau);
        out.at(h).bits.set(ctx.conj_char(h, tau));
    }
    return out;
}

std::string check_sample_properties(const Context& ctx, const Diagram& d, const Diagram& dt,
                                    const std::vector<int>& t, int top) {
    if (top < 0) top = ctx.top();
    for (int h : ctx.lat().below(top)) {
        if (!ctx.is_conj_invariant(dt.at(h)))
            return "D^T(" + std::to_string(h) + ") not conjugation-invariant";
        if (dt.at(h).bits.test(0)) return "1_H in D^T(" + std::to_string(h) + ")";
    }
    for (int h : t)
        if ((dt.at(h).bits & ~d.at(h).bits).none())
            return "D^T(" + std::to_string(h) + ") added nothing";
    for (int h : ctx.lat().below(top)) {
        boost::dynamic_bitset<> fresh = dt.at(h).bits & ~d.at(h).bits;
        if (fresh.none()) continue;
        CharSet fresh_set{h, fresh};
        for (int k : ctx.lat().below(h)) {
            if (k == ctx.bottom()) continue;
            CharSet restr = ctx.restrict_set(fresh_set, k);
            if ((restr.bits & d.at(k).bits).any())
                return "restriction of D^T(" + std::to_string(h) + ")\\D meets D(" +
                       std::to_string(k) + ")";
        }
    }
    return "";
}

namespace {

// (A, T) with A, T nonempty, Gal-invariant and disjoint away from the bottom,
// and T(K) avoiding restrictions of A(H) u T(H) for 1 != K < H.
std::string check_weak_generating_scheme(const Context& ctx, const Diagram& a, const Diagram& t,
                                         int top) {
    for (int h : ctx.lat().below(top)) {
        if (h == ctx.bottom()) continue;
        if (a.at(h).none()) return "A(" + std::to_string(h) + ") empty";
        if (t.at(h).none()) return "T(" + std::to_string(h) + ") empty";
        if (!ctx.is_conj_invariant(a.at(h))) return "A(" + std::to_string(h) + ") not invariant";
        if (!ctx.is_conj_invariant(t.at(h))) return "T(" + std::to_string(h) + ") not invariant";
        if ((a.at(h).bits & t.at(h).bits).any())
            return "A and T meet at " + std::to_string(h);
    }
    for (int h : ctx.lat().below(top)) {
        if (h == ctx.bottom()) continue;
        CharSet both{h, a.at(h).bits | t.at(h).bits};
        for (int k : ctx.lat().below(h)) {
            if (k == h || k == ctx.bottom()) continue;
            CharSet down = ctx.restrict_set(both, k);
            if ((down.bits & t.at(k).bits).any())
                return "antichain condition fails at " + std::to_string(k) + " < " +
                       std::to_string(h);
        }
    }
    return "";
}

}  // namespace

RankTwoOutcome rank_two_part(const Context& ctx, int prime_index, const RankTwoOptions& opts) {
    RankTwoOutcome out;
    RankTwoRun& run = out.run;
    run.group = to_string(ctx.spec());
    run.seed = opts.seed;

    long long p = ctx.lat().prime(prime_index);
    run.prime = p;
    int top = ctx.lat().sylow(prime_index);
    int rank = ctx.spec().p_rank(p);
    if (rank == 1) {
        PartPair part = cyclic_part(ctx, prime_index);
        VerifyReport cert = verify_tight_pair(ctx, part.D, *part.J, top);
        if (!cert.ok)
            throw std::logic_error("rank_two_part: cyclic delegation failed verification: " +
                                   cert.failure);
        run.success = true;
        run.note = "cyclic part; delegated to the chain construction";
        out.pair = TightPair{std::move(part.D), std::move(part.J), std::move(cert)};
        return out;
    }
    if (rank != 2)
        throw std::invalid_argument("rank_two_part: p-part has rank " + std::to_string(rank));
    if (p % 2 == 0) throw std::invalid_argument("rank_two_part: requires odd order");

    long long order = ctx.lat().at(top).order;
    int n = 0;
    for (long long q = order; q > 1; q /= p) ++n;
    run.n = n;
    run.bounds = rank_two_bounds(n);

    std::mt19937_64 rng(opts.seed);

    // T_1 .. T_n are the order-p^i layers; T_{n+1} is every nontrivial subgroup.
    std::vector<std::vector<int>> t_sets;
    long long q = 1;
    for (int i = 1; i <= n; ++i) {
        q *= p;
        t_sets.push_back(layer(ctx, top, q));
    }
    std::vector<int> all_nontrivial;
    for (int h : ctx.lat().below(top))
        if (h != ctx.bottom()) all_nontrivial.push_back(h);
    t_sets.push_back(all_nontrivial);

    Diagram d = empty_diagram(ctx);
    Diagram before_final = d;  // D_n once the loop passes the last layer stage
    int c_prev = clusteredness(ctx, d, top);  // p for the empty diagram

    for (int stage = 0; stage <= n; ++stage) {
        const std::vector<int>& t = t_sets[stage];
        StageInfo info;
        info.stage = stage;
        bool final_stage = (stage == n);
        int needed = final_stage ? 1 : 2;
        info.threshold = std::max(static_cast<int>(opts.theta * c_prev), needed);

        double alpha = 0;
        for (int h : t) alpha += 1.0 / static_cast<double>(ctx.lat().at(h).order);
        info.alpha = alpha;
        info.beta = static_cast<double>(p) / std::max(1, c_prev);
        double bg = std::pow(info.beta, -n) - 1.0 / static_cast<double>(p);
        info.gamma = bg > 0 ? 1.0 / bg : std::numeric_limits<double>::infinity();
        info.rho = std::exp(-15.0 * (alpha + 1.0) * info.beta * info.gamma);

        if (final_stage) before_final = d;

        Diagram accepted;
        int c_accept = -1;
        for (int attempt = 0; attempt < opts.retries_per_stage && !info.accepted; ++attempt) {
            ++info.retries;
            Diagram cand = sample_enlargement(ctx, d, t, rng, top);
            if (opts.validate_samples) {
                std::string bad = check_sample_properties(ctx, d, cand, t, top);
                if (!bad.empty())
                    throw std::logic_error("rank_two_part: sample property violated: " + bad);
            }
            int c = clusteredness(ctx, cand, top);
            if (c > info.achieved) info.achieved = c;
            if (c >= info.threshold) {
                info.accepted = true;
                c_accept = c;
                accepted = std::move(cand);
            }
        }
        run.stages.push_back(info);
        if (!info.accepted) {
            run.failed_stage = stage;
            run.note = "stage " + std::to_string(stage) + " missed clusteredness threshold " +
                       std::to_string(info.threshold) + " (best " +
                       std::to_string(info.achieved) + " in " + std::to_string(info.retries) +
                       " samples)";
            return out;
        }
        d = std::move(accepted);
        c_prev = c_accept;
    }

    // A = D_{n+1} \ D_n and T = D_n must form a weak generating scheme.
    Diagram t_diag = before_final;
    Diagram a_diag = minus_diagrams(d, t_diag);
    std::string bad = check_weak_generating_scheme(ctx, a_diag, t_diag, top);
    if (!bad.empty())
        throw std::logic_error("rank_two_part: weak generating scheme violated: " + bad);

    // D = r_stabilize(A u T) \ T with J = J[A u T]; verify before returning.
    Diagram au_t = d;  // A u T = D_{n+1}
    auto j = complement_inductor(ctx, au_t);
    std::string cover_witness;
    if (!cover_nonempty(ctx, *j, top, &cover_witness)) {
        run.failed_stage = n;
        run.note = "cover axiom failed after final stage: " + cover_witness;
        return out;
    }
    Diagram tight_d = minus_diagrams(r_stabilize(ctx, au_t), t_diag);
    VerifyReport cert = verify_tight_pair(ctx, tight_d, *j, top);
    if (!cert.ok) {
        run.failed_stage = n;
        run.note = "final verification failed: " + cert.failure;
        return out;
    }
    run.success = true;
    run.note = "verified tight pair";
    out.pair = TightPair{std::move(tight_d), std::move(j), std::move(cert)};
    return out;
}

RankTwoOutcome rank_two_tight_pair(const Context& ctx, const RankTwoOptions& opts) {
    if (ctx.lat().num_primes() != 1)
        throw std::invalid_argument("rank_two_tight_pair: context must be a p-group");
    return rank_two_part(ctx, 0, opts);
}

TightPair auto_tight_pair(const Context& ctx, const RankTwoOptions& opts) {
    std::vector<PartPair> parts;
    for (int pi = 0; pi < ctx.lat().num_primes(); ++pi) {
        long long p = ctx.lat().prime(pi);
        int rank = ctx.spec().p_rank(p);
        if (rank == 1) {
            parts.push_back(cyclic_part(ctx, pi));
        } else if (rank == 2) {
            RankTwoOutcome o = rank_two_part(ctx, pi, opts);
            if (!o.pair)
                throw std::runtime_error("auto_tight_pair: rank-two pipeline failed for p=" +
                                         std::to_string(p) + ": " + o.run.note);
            parts.push_back(PartPair{pi, o.pair->D, o.pair->J});
        } else {
            throw std::invalid_argument("auto_tight_pair: the " + std::to_string(p) +
                                        "-part has rank " + std::to_string(rank) +
                                        "; no tight pair exists in rank >= 3");
        }
    }
    return localize_tight_pairs(ctx, parts);
}

RankTwoBounds rank_two_bounds(int n) {
    if (n < 1) throw std::invalid_argument("rank_two_bounds: n must be >= 1");
    RankTwoBounds out;
    out.n = n;
    constexpr double kLimit = 1e300;

    // ln b_{n,i+1} = ln b - ln 2 - scale * exp(-(n+1) ln b), tracked in log
    // space; once even the log leaves floating range the value saturates.
    auto step = [&](const LogVal& b, double scale) {
        LogVal next;
        next.ln = -std::numeric_limits<double>::infinity();
        next.sat = -1;
        if (b.sat == -1) return next;
        double e = -(n + 1) * b.ln;  // >= 0 since b <= 1
        if (e > 709.0) return next;  // exp overflows double
        double term = scale * std::exp(e);
        double ln = b.ln - std::log(2.0) - term;
        if (ln < -kLimit) return next;
        next.ln = ln;
        next.sat = 0;
        return next;
    };

    out.b.push_back(LogVal{0.0, 0});  // b_{n,0} = 1
    for (int i = 0; i < n; ++i) out.b.push_back(step(out.b.back(), 90.0));
    out.c = step(out.b.back(), 30.0 * (2 * n + 1));

    // d_n: least x with b_{n,n} x > (5 log(2 x^{3n+3/4}) e^{30(2n+1) b^{-(n+1)}})^4,
    // searched monotonically in y = ln x.
    const LogVal& bn = out.b.back();
    if (bn.sat == -1) {
        out.d = LogVal{std::numeric_limits<double>::infinity(), +1};
        return out;
    }
    double e = -(n + 1) * bn.ln;
    if (e > 709.0) {
        out.d = LogVal{std::numeric_limits<double>::infinity(), +1};
        return out;
    }
    double big = 120.0 * (2 * n + 1) * std::exp(e);  // 4 * 30(2n+1) e^{...}
    auto holds = [&](double y) {
        double inner = std::log(2.0) + (3.0 * n + 0.75) * y;
        if (inner <= 0) return false;
        double rhs = 4.0 * std::log(5.0 * inner) + big;
        return y + bn.ln > rhs;
    };
    double lo = 1.0, hi = 2.0;
    while (!holds(hi)) {
        hi *= 2.0;
        if (hi > kLimit) {
            out.d = LogVal{std::numeric_limits<double>::infinity(), +1};
            return out;
        }
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.d = LogVal{hi, 0};  // ln d_n
    return out;
}

PartitionStructure partition_structure(const Context& ctx, int k, int chi, int h) {
    if (h < 0) h = ctx.top();
    if (ctx.lat().at(h).order % 2 == 0)
        throw std::invalid_argument("partition_structure: requires odd order");
    bool is_cover = false;
    for (auto [a, b] : ctx.lat().covers())
        if (a == k && b == h) is_cover = true;
    if (!is_cover) throw std::invalid_argument("partition_structure: K is not maximal in H");

    PartitionStructure ps;
    ps.k = k;
    ps.chi = chi;
    ps.h = h;
    for (int t = 0; t < ctx.nchars(h); ++t)
        if (ctx.restrict_char(h, t, k) == chi) ps.fiber.push_back(t);

    int ker = ctx.kernel_of(k, chi);
    for (int l : ctx.lat().below(h)) {
        if (ctx.lat().leq(l, k)) continue;  // (K, H] only
        ps.interval.push_back(l);
        ps.in_s_chi.push_back(ctx.lat().leq(ctx.lat().meet(k, l), ker) ? 1 : 0);
        // blocks: tau ~ tau' iff tau|_L equals tau'|_L up to conjugation
        std::vector<std::vector<int>> blocks;
        std::vector<char> used(ps.fiber.size(), 0);
        for (size_t i = 0; i < ps.fiber.size(); ++i) {
            if (used[i]) continue;
            std::vector<int> block{ps.fiber[i]};
            used[i] = 1;
            int ri = ctx.restrict_char(h, ps.fiber[i], l);
            for (size_t jj = i + 1; jj < ps.fiber.size(); ++jj) {
                if (used[jj]) continue;
                int rj = ctx.restrict_char(h, ps.fiber[jj], l);
                if (rj == ri || rj == ctx.conj_char(l, ri)) {
                    block.push_back(ps.fiber[jj]);
                    used[jj] = 1;
                }
            }
            std::sort(block.begin(), block.end());
            blocks.push_back(std::move(block));
        }
        std::sort(blocks.begin(), blocks.end());
        ps.parts.push_back(std::move(blocks));
    }
    return ps;
}

namespace {

bool refines(const std::vector<std::vector<int>>& fine,
             const std::vector<std::vector<int>>& coarse) {
    for (const auto& fb : fine) {
        bool found = false;
        for (const auto& cb : coarse)
            if (std::includes(cb.begin(), cb.end(), fb.begin(), fb.end())) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

}  // namespace

std::string check_partition_claims(const Context& ctx, const PartitionStructure& ps) {
    const auto& lat = ctx.lat();
    const size_t m = ps.interval.size();
    // (3) blocks of size at most two; (4) discrete off S_chi; (5) unique
    // singleton {1_L^X} on S_chi with every other block a pair
    for (size_t j = 0; j < m; ++j) {
        int l = ps.interval[j];
        for (const auto& b : ps.parts[j])
            if (b.size() > 2) return "claim 3: block of size > 2 at L=" + std::to_string(l);
        if (!ps.in_s_chi[j]) {
            for (const auto& b : ps.parts[j])
                if (b.size() != 1)
                    return "claim 4: P_L not discrete off S_chi at L=" + std::to_string(l);
        } else {
            int singletons = 0;
            int singleton_tau = -1;
            for (const auto& b : ps.parts[j])
                if (b.size() == 1) {
                    ++singletons;
                    singleton_tau = b[0];
                }
            if (singletons != 1)
                return "claim 5: " + std::to_string(singletons) + " singleton blocks at L=" +
                       std::to_string(l);
            if (ctx.restrict_char(ps.h, singleton_tau, l) != 0)
                return "claim 5: singleton block is not the trivial restriction at L=" +
                       std::to_string(l);
        }
    }
    // (1) refinement along M <= L; (2) equality when the larger is in S_chi;
    // (6) distinct partitions intersect blockwise in at most one point
    for (size_t ji = 0; ji < m; ++ji)
        for (size_t jj = 0; jj < m; ++jj) {
            int mi = ps.interval[ji], lj = ps.interval[jj];
            if (ji != jj && lat.leq(mi, lj)) {
                if (!refines(ps.parts[jj], ps.parts[ji]))
                    return "claim 1: P_L does not refine P_M for M=" + std::to_string(mi) +
                           " L=" + std::to_string(lj);
                if (ps.in_s_chi[jj] && ps.parts[jj] != ps.parts[ji])
                    return "claim 2: P_L != P_M with L in S_chi, M=" + std::to_string(mi) +
                           " L=" + std::to_string(lj);
            }
            if (jj > ji && ps.parts[ji] != ps.parts[jj]) {
                for (const auto& b1 : ps.parts[ji])
                    for (const auto& b2 : ps.parts[jj]) {
                        std::vector<int> inter;
                        std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(),
                                              std::back_inserter(inter));
                        if (inter.size() > 1)
                            return "claim 6: blocks share two points, L=" +
                                   std::to_string(ps.interval[ji]) + " L'=" +
                                   std::to_string(ps.interval[jj]);
                    }
            }
        }
    return "";
}

}  // namespace satlab
