#pragma once

#include "satlab/inductor.hpp"
#include "satlab/transfer.hpp"

namespace satlab {

/// Tr(U) = {K <= H : I_K^H R_K^G(U) included in R_H^G(U)}. Total in U; the
/// result is validated before return.
TransferSystem tr_of_universe(const Context& ctx, const CharSet& u);

/// Tr(D) = {K <= H : I_K^H(D(K)) included in D(H)}.
TransferSystem tr_of_diagram(const Context& ctx, const Diagram& d);

/// Least (J,R)-stable diagram containing d:
///   H |-> union of J_K^H(D(K)) over K -> H in R.
/// A single pass suffices because J and R are both transitive.
Diagram jr_stabilize(const Context& ctx, const Diagram& d, const SubInductor& j,
                     const TransferSystem& r);
/// (J, maximal) stabilization.
Diagram j_stabilize(const Context& ctx, const Diagram& d, const SubInductor& j);

struct VerifyReport {
    bool ok = false;
    bool r_stable = false;
    bool gal_invariant = false;
    bool axioms_ok = false;
    bool cover_ok = false;
    std::string failure;  // first failing condition, human-readable
    struct PairWitness {
        int k, h, chi;  // chi: index at H escaping D(H) u Res_J(H)
    };
    std::vector<PairWitness> noncontainment;
    struct EscapeWitness {
        int h, chi;  // chi in D(H) \ Res_J(H)
    };
    std::vector<EscapeWitness> escape;
};

/// A verified (diagram, sub-inductor) pair driving the realization loop.
struct TightPair {
    Diagram D;
    std::shared_ptr<const SubInductor> J;
    VerifyReport cert;
};

/// Checks, below `top`: D is R-stable and Gal-invariant, J passes the axiom
/// suite and has nonempty fibers, I_K^H(D(K)) escapes D(H) u Res_J(H) for
/// every strict K < H, and D(H) escapes Res_J(H) for every H. Failures are
/// reported, never thrown.
VerifyReport verify_tight_pair(const Context& ctx, const Diagram& d, const SubInductor& j,
                               int top = -1);

/// One verified tight pair per prime part, glued across the coprime primary
/// decomposition.
struct PartPair {
    int prime_index = -1;
    Diagram D;  // meaningful on subgroups below the Sylow subgroup
    std::shared_ptr<const SubInductor> J;
};

/// Tensor diagram across parts: D(H) = {chi : chi|_{H_p} in D_p(H_p) for all p}.
Diagram tensor_diagram(const Context& ctx, const std::vector<PartPair>& parts);

/// Assembles and re-verifies the tensor tight pair; throws on verification
/// failure (which would indicate a bug, not bad input).
TightPair localize_tight_pairs(const Context& ctx, const std::vector<PartPair>& parts);

struct RealizeResult {
    CharSet universe;
    int iterations = 0;
};

/// The main realization loop: augments D with units, then alternates
/// (I,R)-stabilization with J-stabilization to a fixed point; returns
/// U = D(G) after checking is_universe(U) and Tr(U) == R exactly.
/// Throws std::runtime_error when a post-check fails.
RealizeResult realize(const Context& ctx, const TransferSystem& r, const TightPair& tp);

}  // namespace satlab
