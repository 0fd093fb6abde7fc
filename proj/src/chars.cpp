#include "satlab/chars.hpp"

#include <algorithm>

namespace satlab {

long long Context::pairing(int raw_char, int raw_elem) const {
    Element a = lat_.decode(raw_char);
    Element x = lat_.decode(raw_elem);
    long long v = 0;
    for (size_t i = 0; i < a.size(); ++i)
        v = (v + static_cast<long long>(a[i]) * x[i] % exp_ * pair_scale_[i]) % exp_;
    return v;
}

Context::Context(GroupSpec spec, long long element_budget)
    : lat_(std::move(spec), element_budget) {
    const int m = lat_.size();
    const int n = lat_.num_elements();
    exp_ = lat_.spec().exponent();
    for (int d : lat_.spec().orders) pair_scale_.push_back(exp_ / d);

    reps_.resize(m);
    idx_from_raw_.resize(m);
    conj_.resize(m);
    for (int h = 0; h < m; ++h) {
        // Ann(H) = {a : <a, g> = 0 for every generator g of H}
        std::vector<int> ann;
        for (int a = 0; a < n; ++a) {
            bool in = true;
            for (int g : lat_.at(h).gens)
                if (pairing(a, g) != 0) {
                    in = false;
                    break;
                }
            if (in) ann.push_back(a);
        }
        std::vector<int> canon(n);
        for (int a = 0; a < n; ++a) {
            int best = a;
            for (int t : ann) best = std::min(best, lat_.add(a, t));
            canon[a] = best;
        }
        std::vector<int> reps;
        for (int a = 0; a < n; ++a)
            if (canon[a] == a) reps.push_back(a);
        std::sort(reps.begin(), reps.end());
        if (static_cast<long long>(reps.size()) != lat_.at(h).order)
            throw std::logic_error("character count mismatch at subgroup " + std::to_string(h));
        std::vector<int> idx(n);
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < reps.size(); ++i) pos[reps[i]] = static_cast<int>(i);
        for (int a = 0; a < n; ++a) idx[a] = pos[canon[a]];
        reps_[h] = std::move(reps);
        idx_from_raw_[h] = std::move(idx);
        conj_[h].resize(reps_[h].size());
        for (size_t i = 0; i < reps_[h].size(); ++i)
            conj_[h][i] = idx_from_raw_[h][lat_.neg(reps_[h][i])];
    }
}

int Context::restrict_char(int h, int i, int k) const {
    if (!lat_.leq(k, h)) throw std::invalid_argument("restrict_char: K not <= H");
    return idx_from_raw_[k][reps_[h][i]];
}

CharSet Context::empty_at(int h) const {
    return CharSet{h, boost::dynamic_bitset<>(nchars(h))};
}

CharSet Context::full_at(int h) const {
    CharSet s{h, boost::dynamic_bitset<>(nchars(h))};
    s.bits.set();
    return s;
}

CharSet Context::singleton(int h, int i) const {
    CharSet s = empty_at(h);
    s.bits.set(i);
    return s;
}

CharSet Context::restrict_set(const CharSet& s, int k) const {
    if (!lat_.leq(k, s.subgroup)) throw std::invalid_argument("restrict_set: K not <= H");
    CharSet out = empty_at(k);
    for (size_t i = s.bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = s.bits.find_next(i))
        out.bits.set(restrict_char(s.subgroup, static_cast<int>(i), k));
    return out;
}

CharSet Context::induce_set(const CharSet& s, int h) const {
    if (!lat_.leq(s.subgroup, h)) throw std::invalid_argument("induce_set: K not <= H");
    CharSet out = empty_at(h);
    for (int t = 0; t < nchars(h); ++t)
        if (s.bits.test(restrict_char(h, t, s.subgroup))) out.bits.set(t);
    return out;
}

CharSet Context::conjugate_set(const CharSet& s) const {
    CharSet out = empty_at(s.subgroup);
    for (size_t i = s.bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = s.bits.find_next(i))
        out.bits.set(conj_[s.subgroup][i]);
    return out;
}

CharSet Context::conj_close(const CharSet& s) const {
    CharSet out = conjugate_set(s);
    out.bits |= s.bits;
    return out;
}

bool Context::is_conj_invariant(const CharSet& s) const {
    for (size_t i = s.bits.find_first(); i != boost::dynamic_bitset<>::npos;
         i = s.bits.find_next(i))
        if (!s.bits.test(conj_[s.subgroup][i])) return false;
    return true;
}

bool Context::is_universe(const CharSet& s) const {
    return s.bits.size() > 0 && s.bits.test(0) && is_conj_invariant(s);
}

int Context::kernel_of(int h, int i) const {
    std::vector<int> ker;
    int rep = reps_[h][i];
    for (int x : lat_.at(h).elems)
        if (pairing(rep, x) == 0) ker.push_back(x);
    int id = lat_.id_of_elements(ker);
    if (id < 0) throw std::logic_error("character kernel is not a subgroup");
    return id;
}

}  // namespace satlab
