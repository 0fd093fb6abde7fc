#pragma once

#include <memory>
#include <random>

#include "satlab/diagram.hpp"

namespace satlab {

/// A family J_K^H of join-maps V_K -> V_H refining induction: equivariant,
/// transitive, split by restriction, compatible with meets, unit-preserving.
/// Implementations are immutable and bound to the Context they were built
/// for; they evaluate on single characters, and sets extend by union.
class SubInductor {
public:
    enum class Kind { Standard, Section, Complement, Tensor };

    virtual ~SubInductor() = default;
    virtual Kind kind() const = 0;
    /// J_K^H({chi}) as a CharSet at H. Requires K <= H.
    virtual CharSet image_char(const Context& ctx, int k, int chi, int h) const = 0;

    CharSet image_set(const Context& ctx, const CharSet& u, int h) const;
};

/// Standard induction: J_K^H = I_K^H (full fibers of restriction).
class StandardInductor final : public SubInductor {
public:
    Kind kind() const override { return Kind::Standard; }
    CharSet image_char(const Context& ctx, int k, int chi, int h) const override;
};

/// Chain construction for a totally ordered interval of subgroups: on each
/// cover, chi maps to {s(chi), conj(s(conj(chi)))} where s lifts the
/// canonical representative one level up (so s fixes the trivial character);
/// longer intervals compose the cover maps.
class SectionInductor final : public SubInductor {
public:
    explicit SectionInductor(std::vector<int> chain) : chain_(std::move(chain)) {}
    Kind kind() const override { return Kind::Section; }
    const std::vector<int>& chain() const { return chain_; }
    CharSet image_char(const Context& ctx, int k, int chi, int h) const override;

private:
    int level_of(int subgroup) const;
    std::vector<int> chain_;  // subgroup ids, ascending by order
};

/// J[D]: standard induction with every fiber through D removed.
/// chi lies in J[D]_K^H(U) iff chi|_K is in U and chi|_M avoids D(M) for all
/// M <= H with M not<= K.
class ComplementInductor final : public SubInductor {
public:
    explicit ComplementInductor(Diagram d) : d_(std::move(d)) {}
    Kind kind() const override { return Kind::Complement; }
    const Diagram& diagram() const { return d_; }
    CharSet image_char(const Context& ctx, int k, int chi, int h) const override;

private:
    Diagram d_;
};

/// Product of per-prime sub-inductors across the primary decomposition: the
/// image of chi is assembled from the factor images of its p-part
/// restrictions.
class TensorInductor final : public SubInductor {
public:
    struct Factor {
        int prime_index;  // into ctx.lat().primary
        std::shared_ptr<const SubInductor> inductor;
    };
    explicit TensorInductor(std::vector<Factor> factors) : factors_(std::move(factors)) {}
    Kind kind() const override { return Kind::Tensor; }
    const std::vector<Factor>& factors() const { return factors_; }
    CharSet image_char(const Context& ctx, int k, int chi, int h) const override;

private:
    std::vector<Factor> factors_;
};

/// Construct the complement inductor J[D]; requires D Gal-invariant with
/// 1_H absent from every D(H).
std::shared_ptr<const SubInductor> complement_inductor(const Context& ctx, const Diagram& d);
std::shared_ptr<const SubInductor> standard_inductor();
/// Tensor of per-prime inductors; primes must be distinct and cover the
/// primary decomposition of the context.
std::shared_ptr<const SubInductor> tensor_inductor(const Context& ctx,
                                                   std::vector<TensorInductor::Factor> factors);

/// Res_J(H): union of J_K^H(full) over K < H.
CharSet residue(const Context& ctx, const SubInductor& j, int h);

/// True iff J_K^H({chi}) is nonempty for all K <= H (<= top) and chi; given
/// the other axioms this is equivalent to the cover axiom.
bool cover_nonempty(const Context& ctx, const SubInductor& j, int top = -1,
                    std::string* witness = nullptr);

enum class AxiomCheckMode { Exhaustive, Sampled };

struct AxiomReport {
    bool ok = true;
    bool join_hom = true;
    bool equivariant = true;
    bool transitive = true;
    bool cover = true;
    bool restriction = true;
    bool unit = true;
    std::string first_failure;
};

/// Verifies the five sub-inductor axioms on all singleton inputs below `top`
/// (plus seeded random set inputs as a drift guard). Sampled mode thins the
/// singleton sweep for large groups.
AxiomReport check_subinductor_axioms(const Context& ctx, const SubInductor& j,
                                     AxiomCheckMode mode = AxiomCheckMode::Exhaustive,
                                     int top = -1);

}  // namespace satlab
