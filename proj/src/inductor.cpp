#include "satlab/inductor.hpp"

#include <algorithm>

namespace satlab {

CharSet SubInductor::image_set(const Context& ctx, const CharSet& u, int h) const {
    CharSet out = ctx.empty_at(h);
    for (size_t i = u.bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = u.bits.find_next(i))
        out.bits |= image_char(ctx, u.subgroup, static_cast<int>(i), h).bits;
    return out;
}

CharSet StandardInductor::image_char(const Context& ctx, int k, int chi, int h) const {
    CharSet out = ctx.empty_at(h);
    for (int t = 0; t < ctx.nchars(h); ++t)
        if (ctx.restrict_char(h, t, k) == chi) out.bits.set(t);
    return out;
}

int SectionInductor::level_of(int subgroup) const {
    for (size_t i = 0; i < chain_.size(); ++i)
        if (chain_[i] == subgroup) return static_cast<int>(i);
    return -1;
}

CharSet SectionInductor::image_char(const Context& ctx, int k, int chi, int h) const {
    int lk = level_of(k), lh = level_of(h);
    if (lk < 0 || lh < 0 || lk > lh)
        throw std::invalid_argument("section inductor: pair outside its chain");
    std::vector<int> cur{chi};
    for (int lvl = lk + 1; lvl <= lh; ++lvl) {
        int lo = chain_[lvl - 1], hi = chain_[lvl];
        std::vector<int> next;
        for (int c : cur) {
            // lift by reinterpreting the canonical representative one level up
            int lift = ctx.char_from_raw(hi, ctx.char_rep_raw(lo, c));
            int conj_lift = ctx.conj_char(
                hi, ctx.char_from_raw(hi, ctx.char_rep_raw(lo, ctx.conj_char(lo, c))));
            next.push_back(lift);
            if (conj_lift != lift) next.push_back(conj_lift);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cur = std::move(next);
    }
    CharSet out = ctx.empty_at(h);
    for (int c : cur) out.bits.set(c);
    return out;
}

CharSet ComplementInductor::image_char(const Context& ctx, int k, int chi, int h) const {
    CharSet out = ctx.empty_at(h);
    const auto& below = ctx.lat().below(h);
    for (int t = 0; t < ctx.nchars(h); ++t) {
        if (ctx.restrict_char(h, t, k) != chi) continue;
        bool clean = true;
        for (int m : below) {
            if (ctx.lat().leq(m, k)) continue;  // (K,H] only
            if (d_.at(m).bits.test(ctx.restrict_char(h, t, m))) {
                clean = false;
                break;
            }
        }
        if (clean) out.bits.set(t);
    }
    return out;
}

CharSet TensorInductor::image_char(const Context& ctx, int k, int chi, int h) const {
    std::vector<std::pair<int, CharSet>> parts;  // (H_p, factor image at H_p)
    parts.reserve(factors_.size());
    for (const auto& f : factors_) {
        int kp = ctx.lat().p_part(k, f.prime_index);
        int hp = ctx.lat().p_part(h, f.prime_index);
        int chi_p = ctx.restrict_char(k, chi, kp);
        parts.emplace_back(hp, f.inductor->image_char(ctx, kp, chi_p, hp));
    }
    CharSet out = ctx.empty_at(h);
    for (int t = 0; t < ctx.nchars(h); ++t) {
        bool in = true;
        for (const auto& [hp, s] : parts)
            if (!s.bits.test(ctx.restrict_char(h, t, hp))) {
                in = false;
                break;
            }
        if (in) out.bits.set(t);
    }
    return out;
}

std::shared_ptr<const SubInductor> standard_inductor() {
    return std::make_shared<StandardInductor>();
}

std::shared_ptr<const SubInductor> complement_inductor(const Context& ctx, const Diagram& d) {
    if (!is_gal_invariant(ctx, d))
        throw std::invalid_argument("complement_inductor: diagram is not Gal-invariant");
    for (int h = 0; h < ctx.num_subgroups(); ++h)
        if (d.at(h).bits.test(0))
            throw std::invalid_argument("complement_inductor: trivial character in D(" +
                                        std::to_string(h) + ")");
    return std::make_shared<ComplementInductor>(d);
}

std::shared_ptr<const SubInductor> tensor_inductor(const Context& ctx,
                                                   std::vector<TensorInductor::Factor> factors) {
    std::vector<char> seen(ctx.lat().num_primes(), 0);
    for (const auto& f : factors) {
        if (f.prime_index < 0 || f.prime_index >= ctx.lat().num_primes())
            throw std::invalid_argument("tensor_inductor: bad prime index");
        if (seen[f.prime_index]++)
            throw std::invalid_argument("tensor_inductor: duplicate prime factor");
        if (!f.inductor) throw std::invalid_argument("tensor_inductor: null factor");
    }
    for (int pi = 0; pi < ctx.lat().num_primes(); ++pi)
        if (!seen[pi])
            throw std::invalid_argument("tensor_inductor: missing factor for prime " +
                                        std::to_string(ctx.lat().prime(pi)));
    return std::make_shared<TensorInductor>(std::move(factors));
}

CharSet residue(const Context& ctx, const SubInductor& j, int h) {
    CharSet out = ctx.empty_at(h);
    for (int k : ctx.lat().below(h)) {
        if (k == h) continue;
        out.bits |= j.image_set(ctx, ctx.full_at(k), h).bits;
    }
    return out;
}

bool cover_nonempty(const Context& ctx, const SubInductor& j, int top, std::string* witness) {
    if (top < 0) top = ctx.top();
    for (int h : ctx.lat().below(top))
        for (int k : ctx.lat().below(h))
            for (int chi = 0; chi < ctx.nchars(k); ++chi)
                if (j.image_char(ctx, k, chi, h).none()) {
                    if (witness)
                        *witness = "empty fiber J_{" + std::to_string(k) + "}^{" +
                                   std::to_string(h) + "}(chi=" + std::to_string(chi) + ")";
                    return false;
                }
    return true;
}

namespace {

CharSet random_charset(const Context& ctx, int h, std::mt19937_64& rng) {
    CharSet s = ctx.empty_at(h);
    for (int i = 0; i < ctx.nchars(h); ++i)
        if (rng() & 1) s.bits.set(i);
    return s;
}

}  // namespace

AxiomReport check_subinductor_axioms(const Context& ctx, const SubInductor& j, AxiomCheckMode mode,
                                     int top) {
    if (top < 0) top = ctx.top();
    AxiomReport r;
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        r.ok = false;
        if (r.first_failure.empty()) r.first_failure = what;
    };
    std::mt19937_64 rng(0x5a71ab5eedULL);
    const auto& ids = ctx.lat().below(top);
    // Sampled mode thins the per-character sweeps for large groups.
    auto char_stride = [&](int k) {
        if (mode == AxiomCheckMode::Exhaustive) return 1;
        return std::max(1, ctx.nchars(k) / 8);
    };

    // unit + equivariance + cover on singletons
    for (int h : ids)
        for (int k : ctx.lat().below(h)) {
            if (!j.image_char(ctx, k, 0, h).test(0))
                fail(r.unit, "unit: 1_H not in J(1_K) at K=" + std::to_string(k) +
                                 " H=" + std::to_string(h));
            for (int chi = 0; chi < ctx.nchars(k); chi += char_stride(k)) {
                CharSet img = j.image_char(ctx, k, chi, h);
                CharSet conj_img = j.image_char(ctx, k, ctx.conj_char(k, chi), h);
                if (ctx.conjugate_set(img) != conj_img)
                    fail(r.equivariant, "equivariance at K=" + std::to_string(k) +
                                            " H=" + std::to_string(h) +
                                            " chi=" + std::to_string(chi));
                CharSet back = ctx.restrict_set(img, k);
                if (back != ctx.singleton(k, chi))
                    fail(r.cover, "cover: R(J(chi)) != {chi} at K=" + std::to_string(k) +
                                      " H=" + std::to_string(h) + " chi=" + std::to_string(chi));
            }
        }
    // transitivity on singletons
    for (int h : ids)
        for (int l : ctx.lat().below(h))
            for (int k : ctx.lat().below(l))
                for (int chi = 0; chi < ctx.nchars(k); chi += char_stride(k)) {
                    CharSet via = j.image_set(ctx, j.image_char(ctx, k, chi, l), h);
                    if (via != j.image_char(ctx, k, chi, h))
                        fail(r.transitive, "transitivity at K=" + std::to_string(k) +
                                               " L=" + std::to_string(l) +
                                               " H=" + std::to_string(h));
                }
    // restriction axiom on singletons
    for (int h : ids)
        for (int k : ctx.lat().below(h))
            for (int l : ctx.lat().below(h)) {
                int kl = ctx.lat().meet(k, l);
                for (int chi = 0; chi < ctx.nchars(l); chi += char_stride(l)) {
                    CharSet lhs = ctx.restrict_set(j.image_char(ctx, l, chi, h), k);
                    CharSet rhs =
                        j.image_char(ctx, kl, ctx.restrict_char(l, chi, kl), k);
                    if (!lhs.bits.is_subset_of(rhs.bits))
                        fail(r.restriction, "restriction axiom at K=" + std::to_string(k) +
                                                " L=" + std::to_string(l) +
                                                " H=" + std::to_string(h));
                }
            }
    // join-homomorphism + set-level cover on random sets (drift guard)
    for (int h : ids)
        for (int k : ctx.lat().below(h))
            for (int rep = 0; rep < 4; ++rep) {
                CharSet u = random_charset(ctx, k, rng);
                CharSet img = j.image_set(ctx, u, h);
                CharSet uni = ctx.empty_at(h);
                for (size_t i = u.bits.find_first(); i != boost::dynamic_bitset<>::npos;
                     i = u.bits.find_next(i))
                    uni.bits |= j.image_char(ctx, k, static_cast<int>(i), h).bits;
                if (img != uni)
                    fail(r.join_hom, "join-homomorphism at K=" + std::to_string(k) +
                                         " H=" + std::to_string(h));
                if (ctx.restrict_set(img, k) != u)
                    fail(r.cover, "cover on sets at K=" + std::to_string(k) +
                                      " H=" + std::to_string(h));
            }
    return r;
}

}  // namespace satlab
