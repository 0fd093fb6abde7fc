#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace satlab {

/// Thrown when an operation would exceed its configured search budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of a group C_{d_1} x ... x C_{d_k}: coordinate tuple with 0 <= x_i < d_i.
using Element = std::vector<int>;

struct PrimaryPart {
    long long prime = 0;
    std::vector<int> factor_indices;  // positions i with prime | orders[i]
    long long order = 1;              // the p-power part of |G|
};

/// A finite Abelian group given as an explicit product of cyclic groups.
struct GroupSpec {
    std::vector<int> orders;           // each >= 2
    std::vector<PrimaryPart> primary;  // ascending by prime

    long long order() const;
    long long exponent() const;  // lcm of the orders
    int num_factors() const { return static_cast<int>(orders.size()); }
    // Minimal number of generators of the p-part (#factors divisible by p).
    int p_rank(long long p) const;
};

/// Parses the grammar C<int>(xC<int>)*, each int >= 2.
GroupSpec parse_group(const std::string& text);
std::string to_string(const GroupSpec& spec);

struct Subgroup {
    int id = -1;
    std::vector<int> elems;  // raw element indices, ascending (== tuple-lex order)
    long long order = 0;
    std::vector<int> gens;  // deterministic greedy generating set
};

/// The full lattice of subgroups, with canonical ids ordered by
/// (order, lexicographic element list). Immutable once built.
class SubgroupLattice {
public:
    SubgroupLattice(GroupSpec spec, long long element_budget);

    const GroupSpec& spec() const { return spec_; }
    int size() const { return static_cast<int>(subgroups_.size()); }
    const Subgroup& at(int id) const { return subgroups_.at(id); }
    int bottom() const { return bottom_; }
    int top() const { return top_; }

    bool leq(int k, int h) const { return leq_[static_cast<size_t>(k) * subgroups_.size() + h] != 0; }
    int meet(int a, int b) const { return meet_[static_cast<size_t>(a) * subgroups_.size() + b]; }
    int join(int a, int b) const { return join_[static_cast<size_t>(a) * subgroups_.size() + b]; }

    const std::vector<int>& below(int h) const { return below_[h]; }
    const std::vector<std::pair<int, int>>& strict_pairs() const { return strict_pairs_; }
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }

    /// Id of the subgroup with exactly these elements, or -1.
    int id_of_elements(const std::vector<int>& sorted_raw) const;

    // Element arithmetic (raw index <-> tuple; raw order equals tuple-lex order).
    int num_elements() const { return n_elems_; }
    Element decode(int raw) const;
    int encode(const Element& e) const;
    int add(int a, int b) const;
    int neg(int a) const;
    int elem_order(int a) const;

    // Primary structure.
    int num_primes() const { return static_cast<int>(sylow_.size()); }
    long long prime(int pi) const { return spec_.primary[pi].prime; }
    int sylow(int pi) const { return sylow_[pi]; }
    int p_part(int h, int pi) const { return meet(h, sylow_[pi]); }

private:
    GroupSpec spec_;
    int n_elems_ = 0;
    std::vector<Subgroup> subgroups_;
    std::vector<uint8_t> leq_;
    std::vector<int> meet_, join_;
    std::vector<std::vector<int>> below_;
    std::vector<std::pair<int, int>> strict_pairs_;
    std::vector<std::pair<int, int>> covers_;
    std::map<std::vector<int>, int> id_by_elems_;
    std::vector<int> sylow_;
    int bottom_ = -1, top_ = -1;
};

/// Enumerates all subgroups (per prime part, then combined across coprime
/// parts). Throws BudgetError when |G| exceeds the element budget.
SubgroupLattice enumerate_subgroups(const GroupSpec& spec, long long element_budget = 10000);

/// log_p([H:K]) for K <= H with prime-power index. Throws otherwise.
int rank_of_pair(const SubgroupLattice& lat, int k, int h);

}  // namespace satlab
