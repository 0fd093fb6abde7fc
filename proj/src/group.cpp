#include "satlab/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace satlab {

namespace {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

std::vector<long long> prime_factors(long long n) {
    std::vector<long long> ps;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

long long p_valuation_part(long long n, long long p) {
    long long q = 1;
    while (n % p == 0) {
        n /= p;
        q *= p;
    }
    return q;
}

void compute_primary(GroupSpec& spec) {
    spec.primary.clear();
    std::set<long long> primes;
    for (int d : spec.orders)
        for (long long p : prime_factors(d)) primes.insert(p);
    for (long long p : primes) {
        PrimaryPart part;
        part.prime = p;
        for (int i = 0; i < spec.num_factors(); ++i) {
            if (spec.orders[i] % p == 0) {
                part.factor_indices.push_back(i);
                part.order *= p_valuation_part(spec.orders[i], p);
            }
        }
        spec.primary.push_back(part);
    }
}

}  // namespace

long long GroupSpec::order() const {
    long long n = 1;
    for (int d : orders) n *= d;
    return n;
}

long long GroupSpec::exponent() const {
    long long l = 1;
    for (int d : orders) l = l / gcd_ll(l, d) * d;
    return l;
}

int GroupSpec::p_rank(long long p) const {
    int r = 0;
    for (int d : orders)
        if (d % p == 0) ++r;
    return r;
}

GroupSpec parse_group(const std::string& text) {
    GroupSpec spec;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("bad group spec '" + text + "': " + why);
    };
    if (text.empty()) fail("empty");
    while (true) {
        if (i >= text.size() || text[i] != 'C') fail("expected 'C'");
        ++i;
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) fail("expected integer after 'C'");
        if (i - start > 9) fail("factor order too large");
        long long d = std::stoll(text.substr(start, i - start));
        if (d < 2) fail("factor order must be >= 2");
        spec.orders.push_back(static_cast<int>(d));
        if (i == text.size()) break;
        if (text[i] != 'x') fail("expected 'x' between factors");
        ++i;
    }
    if (spec.order() > (1LL << 40)) fail("group order out of range");
    compute_primary(spec);
    return spec;
}

std::string to_string(const GroupSpec& spec) {
    std::string s;
    for (size_t i = 0; i < spec.orders.size(); ++i) {
        if (i) s += 'x';
        s += 'C';
        s += std::to_string(spec.orders[i]);
    }
    return s;
}

Element SubgroupLattice::decode(int raw) const {
    const auto& d = spec_.orders;
    Element e(d.size());
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
        e[i] = raw % d[i];
        raw /= d[i];
    }
    return e;
}

int SubgroupLattice::encode(const Element& e) const {
    const auto& d = spec_.orders;
    int raw = 0;
    for (size_t i = 0; i < d.size(); ++i) raw = raw * d[i] + e[i];
    return raw;
}

int SubgroupLattice::add(int a, int b) const {
    const auto& d = spec_.orders;
    Element ea = decode(a), eb = decode(b);
    int raw = 0;
    for (size_t i = 0; i < d.size(); ++i) raw = raw * d[i] + (ea[i] + eb[i]) % d[i];
    return raw;
}

int SubgroupLattice::neg(int a) const {
    const auto& d = spec_.orders;
    Element e = decode(a);
    int raw = 0;
    for (size_t i = 0; i < d.size(); ++i) raw = raw * d[i] + (d[i] - e[i]) % d[i];
    return raw;
}

int SubgroupLattice::elem_order(int a) const {
    Element e = decode(a);
    long long ord = 1;
    for (size_t i = 0; i < e.size(); ++i) {
        long long oi = e[i] == 0 ? 1 : spec_.orders[i] / gcd_ll(spec_.orders[i], e[i]);
        ord = ord / gcd_ll(ord, oi) * oi;
    }
    return static_cast<int>(ord);
}

int SubgroupLattice::id_of_elements(const std::vector<int>& sorted_raw) const {
    auto it = id_by_elems_.find(sorted_raw);
    return it == id_by_elems_.end() ? -1 : it->second;
}

namespace {

// Closure of S (sorted raw set) after adjoining g, within the ambient lattice ops.
std::vector<int> adjoin(const SubgroupLattice& lat, const std::vector<int>& s, int g) {
    std::set<int> out(s.begin(), s.end());
    int k = lat.elem_order(g);
    int step = 0;
    for (int j = 1; j < k; ++j) {
        step = lat.add(step, g);
        for (int x : s) out.insert(lat.add(x, step));
    }
    return std::vector<int>(out.begin(), out.end());
}

std::vector<std::vector<int>> subgroups_of_part(const SubgroupLattice& lat,
                                                const std::vector<int>& part_elems) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    std::vector<int> triv{0};
    seen.insert(triv);
    queue.push_back(triv);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        std::vector<int> cur = queue[qi];
        for (int g : part_elems) {
            if (std::binary_search(cur.begin(), cur.end(), g)) continue;
            auto nxt = adjoin(lat, cur, g);
            if (seen.insert(nxt).second) queue.push_back(nxt);
        }
    }
    return std::vector<std::vector<int>>(seen.begin(), seen.end());
}

}  // namespace

SubgroupLattice::SubgroupLattice(GroupSpec spec, long long element_budget) : spec_(std::move(spec)) {
    if (spec_.primary.empty()) compute_primary(spec_);
    long long n = spec_.order();
    if (n > element_budget)
        throw BudgetError("group order " + std::to_string(n) + " exceeds element budget " +
                          std::to_string(element_budget));
    n_elems_ = static_cast<int>(n);

    // Element sets of the Sylow subgroups: coordinates that are multiples of d_i/p^{v_p(d_i)}.
    std::vector<std::vector<int>> sylow_elems;
    for (const auto& part : spec_.primary) {
        std::vector<int> elems;
        for (int raw = 0; raw < n_elems_; ++raw) {
            Element e = decode(raw);
            bool in = true;
            for (int i = 0; i < spec_.num_factors(); ++i) {
                long long ppart = p_valuation_part(spec_.orders[i], part.prime);
                long long m = spec_.orders[i] / ppart;
                if (e[i] % m != 0) {
                    in = false;
                    break;
                }
            }
            if (in) elems.push_back(raw);
        }
        sylow_elems.push_back(elems);
    }

    // Subgroups of each prime part, then all coprime products.
    std::vector<std::vector<int>> all{{0}};
    for (const auto& syl : sylow_elems) {
        auto parts = subgroups_of_part(*this, syl);
        std::vector<std::vector<int>> next;
        next.reserve(all.size() * parts.size());
        for (const auto& a : all) {
            for (const auto& b : parts) {
                std::vector<int> sum;
                sum.reserve(a.size() * b.size());
                for (int x : a)
                    for (int y : b) sum.push_back(add(x, y));
                std::sort(sum.begin(), sum.end());
                next.push_back(std::move(sum));
            }
        }
        all = std::move(next);
    }

    std::sort(all.begin(), all.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    subgroups_.resize(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        Subgroup& s = subgroups_[i];
        s.id = static_cast<int>(i);
        s.elems = std::move(all[i]);
        s.order = static_cast<long long>(s.elems.size());
        id_by_elems_[s.elems] = s.id;
        // greedy generators
        std::vector<int> clo{0};
        for (int g : s.elems) {
            if (std::binary_search(clo.begin(), clo.end(), g)) continue;
            s.gens.push_back(g);
            clo = adjoin(*this, clo, g);
            if (clo.size() == s.elems.size()) break;
        }
    }
    int m = size();
    bottom_ = 0;
    top_ = m - 1;

    leq_.assign(static_cast<size_t>(m) * m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const auto& ea = subgroups_[a].elems;
            const auto& eb = subgroups_[b].elems;
            if (ea.size() <= eb.size() &&
                std::includes(eb.begin(), eb.end(), ea.begin(), ea.end()))
                leq_[static_cast<size_t>(a) * m + b] = 1;
        }

    meet_.assign(static_cast<size_t>(m) * m, -1);
    join_.assign(static_cast<size_t>(m) * m, -1);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            std::vector<int> inter;
            std::set_intersection(subgroups_[a].elems.begin(), subgroups_[a].elems.end(),
                                  subgroups_[b].elems.begin(), subgroups_[b].elems.end(),
                                  std::back_inserter(inter));
            int mt = id_of_elements(inter);
            if (mt < 0) throw std::logic_error("intersection of subgroups not in lattice");
            meet_[static_cast<size_t>(a) * m + b] = meet_[static_cast<size_t>(b) * m + a] = mt;
            // join = first common upper bound in id order (ids ascend by order),
            // verified below to sit under every other common upper bound
            int jn = -1;
            for (int c = 0; c < m; ++c)
                if (leq(a, c) && leq(b, c)) {
                    jn = c;
                    break;
                }
            for (int c = 0; c < m; ++c)
                if (leq(a, c) && leq(b, c) && !leq(jn, c))
                    throw std::logic_error("join not unique in subgroup lattice");
            join_[static_cast<size_t>(a) * m + b] = join_[static_cast<size_t>(b) * m + a] = jn;
        }

    below_.resize(m);
    for (int h = 0; h < m; ++h)
        for (int k = 0; k < m; ++k)
            if (leq(k, h)) below_[h].push_back(k);

    for (int k = 0; k < m; ++k)
        for (int h = 0; h < m; ++h)
            if (k != h && leq(k, h)) strict_pairs_.emplace_back(k, h);

    for (auto [k, h] : strict_pairs_) {
        bool cover = true;
        for (int l = 0; l < m && cover; ++l)
            if (l != k && l != h && leq(k, l) && leq(l, h)) cover = false;
        if (cover) covers_.emplace_back(k, h);
    }

    for (const auto& syl : sylow_elems) {
        int id = id_of_elements(syl);
        if (id < 0) throw std::logic_error("sylow subgroup missing from lattice");
        sylow_.push_back(id);
    }
}

SubgroupLattice enumerate_subgroups(const GroupSpec& spec, long long element_budget) {
    return SubgroupLattice(spec, element_budget);
}

int rank_of_pair(const SubgroupLattice& lat, int k, int h) {
    if (!lat.leq(k, h)) throw std::invalid_argument("rank_of_pair: K not <= H");
    long long idx = lat.at(h).order / lat.at(k).order;
    if (idx == 1) return 0;
    auto ps = prime_factors(idx);
    if (ps.size() != 1)
        throw std::invalid_argument("rank_of_pair: index " + std::to_string(idx) +
                                    " is not a prime power");
    int e = 0;
    long long p = ps[0];
    while (idx > 1) {
        idx /= p;
        ++e;
    }
    return e;
}

}  // namespace satlab
