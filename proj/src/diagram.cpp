#include "satlab/diagram.hpp"

namespace satlab {

bool Diagram::subset_of(const Diagram& other) const {
    if (values.size() != other.values.size()) return false;
    for (size_t h = 0; h < values.size(); ++h)
        if (!values[h].bits.is_subset_of(other.values[h].bits)) return false;
    return true;
}

size_t Diagram::total_count() const {
    size_t c = 0;
    for (const auto& v : values) c += v.bits.count();
    return c;
}

Diagram empty_diagram(const Context& ctx) {
    Diagram d;
    d.values.reserve(ctx.num_subgroups());
    for (int h = 0; h < ctx.num_subgroups(); ++h) d.values.push_back(ctx.empty_at(h));
    return d;
}

Diagram union_diagrams(const Diagram& a, const Diagram& b) {
    Diagram out = a;
    for (size_t h = 0; h < out.values.size(); ++h) out.values[h].bits |= b.values[h].bits;
    return out;
}

Diagram minus_diagrams(const Diagram& a, const Diagram& b) {
    Diagram out = a;
    for (size_t h = 0; h < out.values.size(); ++h) out.values[h].bits -= b.values[h].bits;
    return out;
}

bool is_gal_invariant(const Context& ctx, const Diagram& d) {
    for (const auto& v : d.values)
        if (!ctx.is_conj_invariant(v)) return false;
    return true;
}

bool is_universal(const Context& ctx, const Diagram& d) {
    for (const auto& v : d.values)
        if (!ctx.is_universe(v)) return false;
    return true;
}

bool is_r_stable(const Context& ctx, const Diagram& d) {
    for (auto [k, h] : ctx.lat().strict_pairs())
        if (!ctx.restrict_set(d.at(h), k).bits.is_subset_of(d.at(k).bits)) return false;
    return true;
}

Diagram r_stabilize(const Context& ctx, const Diagram& d) {
    Diagram out = d;
    for (int h = 0; h < ctx.num_subgroups(); ++h)
        for (int k = 0; k < ctx.num_subgroups(); ++k)
            if (h != k && ctx.lat().leq(h, k)) out.at(h).bits |= ctx.restrict_set(d.at(k), h).bits;
    return out;
}

Diagram restriction_diagram(const Context& ctx, const CharSet& u) {
    if (u.subgroup != ctx.top())
        throw std::invalid_argument("restriction_diagram: set must live at the top level");
    Diagram d = empty_diagram(ctx);
    for (int h = 0; h < ctx.num_subgroups(); ++h) d.at(h) = ctx.restrict_set(u, h);
    return d;
}

}  // namespace satlab
