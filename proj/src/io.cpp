#include "satlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

namespace satlab::io {

namespace {

json element_json(const Element& e) { return json(e); }

Element element_from_json(const json& j) { return j.get<Element>(); }

void require_group(const Context& ctx, const json& j) {
    if (j.at("group").get<std::string>() != to_string(ctx.spec()))
        throw std::invalid_argument("json group '" + j.at("group").get<std::string>() +
                                    "' does not match context " + to_string(ctx.spec()));
}

}  // namespace

json lattice_json(const Context& ctx) {
    const auto& lat = ctx.lat();
    json subgroups = json::array();
    for (int i = 0; i < lat.size(); ++i) {
        json elems = json::array();
        for (int raw : lat.at(i).elems) elems.push_back(element_json(lat.decode(raw)));
        subgroups.push_back({{"id", i}, {"order", lat.at(i).order}, {"elements", elems}});
    }
    json leq = json::array();
    for (auto [k, h] : lat.strict_pairs()) leq.push_back(json::array({k, h}));
    return json{{"group", to_string(ctx.spec())}, {"subgroups", subgroups}, {"leq", leq}};
}

json charset_json(const Context& ctx, const CharSet& s) {
    json chars = json::array();
    for (size_t i = s.bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = s.bits.find_next(i))
        chars.push_back(element_json(ctx.char_rep(s.subgroup, static_cast<int>(i))));
    return json{{"group", to_string(ctx.spec())}, {"subgroup", s.subgroup}, {"chars", chars}};
}

CharSet charset_from_json(const Context& ctx, const json& j) {
    require_group(ctx, j);
    int h = j.at("subgroup").get<int>();
    if (h < 0 || h >= ctx.num_subgroups()) throw std::invalid_argument("bad subgroup id");
    CharSet s = ctx.empty_at(h);
    for (const auto& rep : j.at("chars")) {
        Element e = element_from_json(rep);
        if (static_cast<int>(e.size()) != ctx.spec().num_factors())
            throw std::invalid_argument("character tuple has wrong arity");
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] < 0 || e[i] >= ctx.spec().orders[i])
                throw std::invalid_argument("character tuple out of range");
        s.bits.set(ctx.char_from_raw(h, ctx.lat().encode(e)));
    }
    return s;
}

json ts_json(const Context& ctx, const TransferSystem& ts) {
    json edges = json::array();
    for (auto [k, h] : ts.strict_edges()) edges.push_back(json::array({k, h}));
    return json{{"group", to_string(ctx.spec())}, {"edges", edges}};
}

TransferSystem ts_from_json(const Context& ctx, const json& j) {
    require_group(ctx, j);
    TransferSystem ts(ctx.num_subgroups());
    for (const auto& e : j.at("edges")) {
        int k = e.at(0).get<int>(), h = e.at(1).get<int>();
        if (k < 0 || h < 0 || k >= ts.n || h >= ts.n)
            throw std::invalid_argument("edge subgroup id out of range");
        ts.set_rel(k, h, true);
    }
    auto v = validate_transfer_system(ctx.lat(), ts);
    if (!v.ok)
        throw std::invalid_argument("edge list is not a valid transfer system (" + v.axiom +
                                    ": " + v.message + ")");
    return ts;
}

json diagram_json(const Context& ctx, const Diagram& d) {
    json values = json::object();
    for (int h = 0; h < ctx.num_subgroups(); ++h) {
        json chars = json::array();
        for (size_t i = d.at(h).bits.find_first(); i != boost::dynamic_bitset<>::npos;
             i = d.at(h).bits.find_next(i))
            chars.push_back(element_json(ctx.char_rep(h, static_cast<int>(i))));
        values[std::to_string(h)] = chars;
    }
    return json{{"group", to_string(ctx.spec())}, {"values", values}};
}

Diagram diagram_from_json(const Context& ctx, const json& j) {
    require_group(ctx, j);
    Diagram d = empty_diagram(ctx);
    for (const auto& [key, chars] : j.at("values").items()) {
        int h = std::stoi(key);
        if (h < 0 || h >= ctx.num_subgroups()) throw std::invalid_argument("bad subgroup id");
        for (const auto& rep : chars)
            d.at(h).bits.set(ctx.char_from_raw(h, ctx.lat().encode(element_from_json(rep))));
    }
    return d;
}

json inductor_json(const Context& ctx, const SubInductor& j) {
    switch (j.kind()) {
        case SubInductor::Kind::Standard:
            return json{{"kind", "standard"}};
        case SubInductor::Kind::Section: {
            const auto& s = static_cast<const SectionInductor&>(j);
            return json{{"kind", "section"}, {"chain", s.chain()}};
        }
        case SubInductor::Kind::Complement: {
            const auto& c = static_cast<const ComplementInductor&>(j);
            return json{{"kind", "complement"}, {"diagram", diagram_json(ctx, c.diagram())}};
        }
        case SubInductor::Kind::Tensor: {
            const auto& t = static_cast<const TensorInductor&>(j);
            json factors = json::array();
            for (const auto& f : t.factors())
                factors.push_back({{"prime", ctx.lat().prime(f.prime_index)},
                                   {"inductor", inductor_json(ctx, *f.inductor)}});
            return json{{"kind", "tensor"}, {"factors", factors}};
        }
    }
    throw std::logic_error("unknown inductor kind");
}

std::shared_ptr<const SubInductor> inductor_from_json(const Context& ctx, const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "standard") return standard_inductor();
    if (kind == "section") {
        auto chain = j.at("chain").get<std::vector<int>>();
        for (int id : chain)
            if (id < 0 || id >= ctx.num_subgroups())
                throw std::invalid_argument("section chain id out of range");
        return std::make_shared<SectionInductor>(std::move(chain));
    }
    if (kind == "complement")
        return complement_inductor(ctx, diagram_from_json(ctx, j.at("diagram")));
    if (kind == "tensor") {
        std::vector<TensorInductor::Factor> factors;
        for (const auto& f : j.at("factors")) {
            long long p = f.at("prime").get<long long>();
            int pi = -1;
            for (int q = 0; q < ctx.lat().num_primes(); ++q)
                if (ctx.lat().prime(q) == p) pi = q;
            if (pi < 0) throw std::invalid_argument("tensor factor prime not in group");
            factors.push_back({pi, inductor_from_json(ctx, f.at("inductor"))});
        }
        return tensor_inductor(ctx, std::move(factors));
    }
    throw std::invalid_argument("unknown inductor kind '" + kind + "'");
}

json verify_report_json(const VerifyReport& r) {
    json noncont = json::array();
    for (const auto& w : r.noncontainment)
        noncont.push_back({{"k", w.k}, {"h", w.h}, {"witness", w.chi}});
    json escape = json::array();
    for (const auto& w : r.escape) escape.push_back({{"h", w.h}, {"witness", w.chi}});
    return json{{"ok", r.ok},
                {"r_stable", r.r_stable},
                {"gal_invariant", r.gal_invariant},
                {"axioms_ok", r.axioms_ok},
                {"cover_ok", r.cover_ok},
                {"failure", r.failure},
                {"noncontainment", noncont},
                {"escape", escape}};
}

json tight_pair_json(const Context& ctx, const TightPair& tp) {
    return json{{"group", to_string(ctx.spec())},
                {"diagram", diagram_json(ctx, tp.D)},
                {"inductor", inductor_json(ctx, *tp.J)},
                {"certificate", verify_report_json(tp.cert)}};
}

TightPair tight_pair_from_json(const Context& ctx, const json& j) {
    require_group(ctx, j);
    TightPair tp;
    tp.D = diagram_from_json(ctx, j.at("diagram"));
    tp.J = inductor_from_json(ctx, j.at("inductor"));
    tp.cert = verify_tight_pair(ctx, tp.D, *tp.J);
    return tp;
}

namespace {

json logval_json(const LogVal& v) {
    if (v.sat < 0) return json{{"ln", nullptr}, {"saturated", "underflow"}};
    if (v.sat > 0) return json{{"ln", nullptr}, {"saturated", "overflow"}};
    return json{{"ln", v.ln}, {"saturated", nullptr}};
}

}  // namespace

json rank_two_run_json(const RankTwoRun& run) {
    json stages = json::array();
    for (const auto& s : run.stages)
        stages.push_back({{"stage", s.stage},
                          {"threshold", s.threshold},
                          {"achieved", s.achieved},
                          {"retries", s.retries},
                          {"accepted", s.accepted},
                          {"alpha", s.alpha},
                          {"beta", s.beta},
                          {"gamma", s.gamma},
                          {"rho", s.rho}});
    json out{{"group", run.group},   {"seed", run.seed},
             {"prime", run.prime},   {"n", run.n},
             {"stages", stages},     {"success", run.success},
             {"failed_stage", run.failed_stage}, {"note", run.note}};
    if (run.bounds.n > 0) out["bounds"] = bounds_json(run.bounds);
    return out;
}

json bounds_json(const RankTwoBounds& b) {
    json bs = json::array();
    for (const auto& v : b.b) bs.push_back(logval_json(v));
    return json{{"n", b.n}, {"b", bs}, {"c", logval_json(b.c)}, {"d", logval_json(b.d)}};
}

// ---------------------------------------------------------------------------
// Cross-context tensor of tight-pair bundles.

namespace {

struct Embedding {
    const Context& prod;
    const Context& factor;
    int coord_offset;  // factor coordinate 0 sits at this product coordinate

    int embed_elem(int raw) const {
        Element fe = factor.lat().decode(raw);
        Element pe(prod.spec().num_factors(), 0);
        for (size_t i = 0; i < fe.size(); ++i) pe[coord_offset + i] = fe[i];
        return prod.lat().encode(pe);
    }

    int embed_subgroup(int id) const {
        std::vector<int> elems;
        for (int raw : factor.lat().at(id).elems) elems.push_back(embed_elem(raw));
        std::sort(elems.begin(), elems.end());
        int pid = prod.lat().id_of_elements(elems);
        if (pid < 0) throw std::logic_error("embedded subgroup missing from product lattice");
        return pid;
    }

    // Character i at factor subgroup id -> character index at the embedded
    // subgroup (pad the canonical representative with zeros).
    int embed_char(int id, int i, int embedded_id) const {
        return prod.char_from_raw(embedded_id, embed_elem(factor.char_rep_raw(id, i)));
    }

    Diagram embed_diagram(const Diagram& d) const {
        Diagram out = empty_diagram(prod);
        for (int h = 0; h < factor.num_subgroups(); ++h) {
            int ph = embed_subgroup(h);
            for (size_t i = d.at(h).bits.find_first(); i != boost::dynamic_bitset<>::npos;
                 i = d.at(h).bits.find_next(i))
                out.at(ph).bits.set(embed_char(h, static_cast<int>(i), ph));
        }
        return out;
    }

    std::shared_ptr<const SubInductor> embed_inductor(const SubInductor& j) const;
};

std::shared_ptr<const SubInductor> Embedding::embed_inductor(const SubInductor& j) const {
    switch (j.kind()) {
        case SubInductor::Kind::Standard:
            return standard_inductor();
        case SubInductor::Kind::Section: {
            const auto& s = static_cast<const SectionInductor&>(j);
            std::vector<int> chain;
            for (int id : s.chain()) chain.push_back(embed_subgroup(id));
            return std::make_shared<SectionInductor>(std::move(chain));
        }
        case SubInductor::Kind::Complement: {
            const auto& c = static_cast<const ComplementInductor&>(j);
            return std::make_shared<ComplementInductor>(embed_diagram(c.diagram()));
        }
        case SubInductor::Kind::Tensor:
            throw std::logic_error("nested tensor embedding handled by caller");
    }
    throw std::logic_error("unknown inductor kind");
}

int prime_index_in(const Context& ctx, long long p) {
    for (int pi = 0; pi < ctx.lat().num_primes(); ++pi)
        if (ctx.lat().prime(pi) == p) return pi;
    throw std::logic_error("prime not found in product context");
}

// Splits a factor bundle into per-prime parts inside the product context.
void collect_parts(const Embedding& emb, const Context& fctx, const Diagram& d,
                   const SubInductor& j, std::vector<PartPair>& parts) {
    if (j.kind() == SubInductor::Kind::Tensor) {
        const auto& t = static_cast<const TensorInductor&>(j);
        for (const auto& f : t.factors()) {
            long long p = fctx.lat().prime(f.prime_index);
            PartPair part;
            part.prime_index = prime_index_in(emb.prod, p);
            part.D = emb.embed_diagram(d);
            part.J = emb.embed_inductor(*f.inductor);
            parts.push_back(std::move(part));
        }
        return;
    }
    if (fctx.lat().num_primes() != 1)
        throw std::invalid_argument("non-tensor inductor on a multi-prime factor group");
    PartPair part;
    part.prime_index = prime_index_in(emb.prod, fctx.lat().prime(0));
    part.D = emb.embed_diagram(d);
    part.J = emb.embed_inductor(j);
    parts.push_back(std::move(part));
}

}  // namespace

TensorResult tensor_bundles(const std::vector<json>& bundles) {
    if (bundles.size() < 2)
        throw std::invalid_argument("tensor_bundles: need at least two inputs");
    std::string prod_spec;
    std::vector<std::shared_ptr<Context>> factor_ctxs;
    for (const auto& b : bundles) {
        std::string g = b.at("group").get<std::string>();
        if (!prod_spec.empty()) prod_spec += "x";
        prod_spec += g;
        factor_ctxs.push_back(std::make_shared<Context>(parse_group(g)));
    }
    for (size_t a = 0; a < factor_ctxs.size(); ++a)
        for (size_t b = a + 1; b < factor_ctxs.size(); ++b)
            if (std::gcd(factor_ctxs[a]->spec().order(), factor_ctxs[b]->spec().order()) != 1)
                throw std::invalid_argument("tensor_bundles: factor orders are not coprime");

    auto prod = std::make_shared<Context>(parse_group(prod_spec));
    std::vector<PartPair> parts;
    int offset = 0;
    for (size_t i = 0; i < bundles.size(); ++i) {
        const Context& fctx = *factor_ctxs[i];
        TightPair tp = tight_pair_from_json(fctx, bundles[i]);
        if (!tp.cert.ok)
            throw std::invalid_argument("tensor_bundles: input " + std::to_string(i) +
                                        " is not a tight pair: " + tp.cert.failure);
        Embedding emb{*prod, fctx, offset};
        collect_parts(emb, fctx, tp.D, *tp.J, parts);
        offset += fctx.spec().num_factors();
    }
    TensorResult out;
    out.pair = localize_tight_pairs(*prod, parts);
    out.ctx = std::move(prod);
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
        if (!f.good()) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace satlab::io
