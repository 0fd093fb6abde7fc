#include "satlab/engine.hpp"

namespace satlab {

namespace {

// I_K^H(S) included in T, checked without materializing the induction.
bool induction_contained(const Context& ctx, const CharSet& s, int h, const CharSet& t) {
    for (int tau = 0; tau < ctx.nchars(h); ++tau)
        if (s.bits.test(ctx.restrict_char(h, tau, s.subgroup)) && !t.bits.test(tau)) return false;
    return true;
}

}  // namespace

TransferSystem tr_of_universe(const Context& ctx, const CharSet& u) {
    TransferSystem ts = tr_of_diagram(ctx, restriction_diagram(ctx, u));
    auto v = validate_transfer_system(ctx.lat(), ts);
    if (!v.ok)
        throw std::logic_error("tr_of_universe produced an invalid transfer system: " + v.axiom +
                               " " + v.message);
    return ts;
}

TransferSystem tr_of_diagram(const Context& ctx, const Diagram& d) {
    TransferSystem ts(ctx.num_subgroups());
    for (auto [k, h] : ctx.lat().strict_pairs())
        if (induction_contained(ctx, d.at(k), h, d.at(h))) ts.set_rel(k, h, true);
    return ts;
}

Diagram jr_stabilize(const Context& ctx, const Diagram& d, const SubInductor& j,
                     const TransferSystem& r) {
    Diagram out = empty_diagram(ctx);
    for (int h = 0; h < ctx.num_subgroups(); ++h)
        for (int k : ctx.lat().below(h))
            if (r.rel(k, h)) out.at(h).bits |= j.image_set(ctx, d.at(k), h).bits;
    return out;
}

Diagram j_stabilize(const Context& ctx, const Diagram& d, const SubInductor& j) {
    return jr_stabilize(ctx, d, j, maximal_system(ctx.lat()));
}

VerifyReport verify_tight_pair(const Context& ctx, const Diagram& d, const SubInductor& j,
                               int top) {
    if (top < 0) top = ctx.top();
    VerifyReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.failure.empty()) rep.failure = why;
    };
    const auto& ids = ctx.lat().below(top);

    rep.gal_invariant = true;
    for (int h : ids)
        if (!ctx.is_conj_invariant(d.at(h))) {
            rep.gal_invariant = false;
            fail("D(" + std::to_string(h) + ") is not conjugation-invariant");
            break;
        }

    rep.r_stable = true;
    for (int h : ids)
        for (int k : ctx.lat().below(h))
            if (k != h &&
                !ctx.restrict_set(d.at(h), k).bits.is_subset_of(d.at(k).bits)) {
                rep.r_stable = false;
                fail("D is not R-stable at " + std::to_string(k) + " <= " + std::to_string(h));
            }

    AxiomReport ax = check_subinductor_axioms(ctx, j, AxiomCheckMode::Exhaustive, top);
    // J[D]-style inductors legitimately fail the cover axiom when a fiber is
    // blocked; that shows up as cover_ok below, not as an axiom failure.
    rep.axioms_ok =
        ax.join_hom && ax.equivariant && ax.transitive && ax.restriction && ax.unit;
    if (!rep.axioms_ok) fail("sub-inductor axioms: " + ax.first_failure);
    std::string cover_witness;
    rep.cover_ok = cover_nonempty(ctx, j, top, &cover_witness);
    if (!rep.cover_ok) fail("cover axiom: " + cover_witness);

    bool conditions_ok = true;
    for (int h : ids) {
        CharSet res = residue(ctx, j, h);
        // condition (3): D(H) escapes Res_J(H)
        boost::dynamic_bitset<> esc = d.at(h).bits & ~res.bits;
        if (esc.none()) {
            conditions_ok = false;
            fail("D(" + std::to_string(h) + ") contained in Res_J");
        } else {
            rep.escape.push_back({h, static_cast<int>(esc.find_first())});
        }
        // condition (2): I_K^H(D(K)) escapes D(H) u Res_J(H) for strict K < H
        boost::dynamic_bitset<> blocked = d.at(h).bits | res.bits;
        for (int k : ctx.lat().below(h)) {
            if (k == h) continue;
            int witness = -1;
            for (int tau = 0; tau < ctx.nchars(h) && witness < 0; ++tau)
                if (d.at(k).bits.test(ctx.restrict_char(h, tau, k)) && !blocked.test(tau))
                    witness = tau;
            if (witness < 0) {
                conditions_ok = false;
                fail("I(D(" + std::to_string(k) + ")) contained in D u Res at H=" +
                     std::to_string(h));
            } else {
                rep.noncontainment.push_back({k, h, witness});
            }
        }
    }

    rep.ok = rep.gal_invariant && rep.r_stable && rep.axioms_ok && rep.cover_ok && conditions_ok;
    return rep;
}

Diagram tensor_diagram(const Context& ctx, const std::vector<PartPair>& parts) {
    Diagram out = empty_diagram(ctx);
    for (int h = 0; h < ctx.num_subgroups(); ++h) {
        for (int t = 0; t < ctx.nchars(h); ++t) {
            bool in = true;
            for (const auto& part : parts) {
                int hp = ctx.lat().p_part(h, part.prime_index);
                if (!part.D.at(hp).bits.test(ctx.restrict_char(h, t, hp))) {
                    in = false;
                    break;
                }
            }
            if (in) out.at(h).bits.set(t);
        }
    }
    return out;
}

TightPair localize_tight_pairs(const Context& ctx, const std::vector<PartPair>& parts) {
    if (parts.empty()) throw std::invalid_argument("localize_tight_pairs: no parts");
    TightPair tp;
    if (parts.size() == 1 && ctx.lat().sylow(parts[0].prime_index) == ctx.top()) {
        tp.D = parts[0].D;
        tp.J = parts[0].J;
    } else {
        std::vector<TensorInductor::Factor> factors;
        for (const auto& part : parts) factors.push_back({part.prime_index, part.J});
        tp.J = tensor_inductor(ctx, std::move(factors));
        tp.D = tensor_diagram(ctx, parts);
    }
    tp.cert = verify_tight_pair(ctx, tp.D, *tp.J);
    if (!tp.cert.ok)
        throw std::runtime_error("localize_tight_pairs: tensor pair failed verification: " +
                                 tp.cert.failure);
    return tp;
}

RealizeResult realize(const Context& ctx, const TransferSystem& r, const TightPair& tp) {
    auto v = validate_transfer_system(ctx.lat(), r);
    if (!v.ok) throw std::invalid_argument("realize: invalid transfer system: " + v.axiom);
    if (!is_saturated(ctx.lat(), r))
        throw std::invalid_argument("realize: transfer system is not saturated");
    if (!tp.cert.ok) throw std::invalid_argument("realize: tight pair is not verified");

    StandardInductor standard;
    TransferSystem maximal = maximal_system(ctx.lat());

    // Start from the tight diagram with units added at every level.
    Diagram d = tp.D;
    for (int h = 0; h < ctx.num_subgroups(); ++h) d.at(h).bits.set(0);

    size_t total_chars = 0;
    for (int h = 0; h < ctx.num_subgroups(); ++h) total_chars += ctx.nchars(h);

    int iterations = 0;
    while (true) {
        size_t before = d.total_count();
        Diagram odd = jr_stabilize(ctx, d, standard, r);
        Diagram even = jr_stabilize(ctx, odd, *tp.J, maximal);
        ++iterations;
        if (!d.subset_of(even)) throw std::logic_error("realize: stabilization not monotone");
        size_t after = even.total_count();
        d = std::move(even);
        if (after == before) break;
        if (static_cast<size_t>(iterations) > total_chars + 2)
            throw std::logic_error("realize: iteration bound exceeded without a fixed point");
    }

    CharSet u = d.at(ctx.top());
    if (!ctx.is_universe(u))
        throw std::runtime_error("realize: result is not a universe (missing trivial or not "
                                 "conjugation-closed)");
    TransferSystem got = tr_of_universe(ctx, u);
    if (got != r) {
        std::string diff;
        for (auto [k, h] : ctx.lat().strict_pairs())
            if (got.rel(k, h) != r.rel(k, h)) {
                diff = std::to_string(k) + "->" + std::to_string(h) +
                       (got.rel(k, h) ? " extra" : " missing");
                break;
            }
        throw std::runtime_error("realize: Tr(U) != R at edge " + diff);
    }
    return RealizeResult{std::move(u), iterations};
}

}  // namespace satlab
