#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lumpbn/graph.hpp"
#include "lumpbn/rational.hpp"

namespace lumpbn {

struct Alphabet {
    std::vector<std::string> symbols;

    int size() const { return static_cast<int>(symbols.size()); }
    int index_of(const std::string& symbol) const;  // throws UnknownSymbol
    bool operator==(const Alphabet&) const = default;
};

// Conditional probability table of one vertex. Rows are indexed by the
// parent-state tuple in mixed radix with the first parent most significant;
// source vertices have exactly one row, the initial distribution.
struct Cpt {
    int vertex = -1;
    std::vector<int> parent_order;  // dag parents in declaration order
    std::vector<std::vector<Rational>> rows;
};

struct BayesNet {
    Dag dag;
    std::vector<Alphabet> alphabets;  // per vertex
    std::vector<Cpt> cpts;            // per vertex

    // Throws on any structural violation: parent order mismatch, wrong row
    // counts, negative entries, rows not summing to exactly 1.
    void validate() const;

    bool shared_alphabet() const;

    // Row index for a full assignment (symbol index per vertex).
    std::size_t cpt_row_index(int v, const std::vector<int>& assignment) const;
    const Rational& cpt_entry(int v, const std::vector<int>& assignment) const;
};

// Dense exact pmf over full assignments of `scope`. Entry order is mixed
// radix over the per-vertex alphabets, last coordinate fastest.
struct JointTable {
    std::vector<std::string> scope;
    std::vector<Alphabet> alphabets;
    std::vector<Rational> mass;

    std::size_t table_size() const;
    std::size_t index_of(const std::vector<int>& assignment) const;
    // Odometer step; returns false after the last assignment.
    bool next_assignment(std::vector<int>& assignment) const;

    // Total mass of a partial event; -1 entries are unconstrained.
    Rational event_mass(const std::vector<int>& partial) const;

    int position_of(const std::string& vertex) const;  // throws UnknownVertex

    bool operator==(const JointTable&) const = default;
};

inline constexpr std::size_t kDefaultEntryBudget = 2'000'000;

// Exact joint by multiplying CPT entries; sums to 1 by construction.
// Throws ModelTooLarge above `entry_budget`.
JointTable joint(const BayesNet& net,
                 std::size_t entry_budget = kDefaultEntryBudget);

// Sums out everything outside `subset` (vertex names, any order; result
// scope keeps the joint's order).
JointTable marginal(const JointTable& table,
                    const std::vector<std::string>& subset);
JointTable marginal_positions(const JointTable& table,
                              const std::vector<int>& positions);

// P(target | given) on the table; nullopt when the conditioning event has
// zero mass. `target` and `given` are partial assignments (-1 = free) with
// disjoint constrained positions.
std::optional<Rational> conditional(const JointTable& table,
                                    const std::vector<int>& target,
                                    const std::vector<int>& given);

bool has_full_support(const BayesNet& net,
                      std::size_t entry_budget = kDefaultEntryBudget);

// Returns a copy with the source-node rows replaced by `alpha`
// (vertex index -> distribution over that vertex's alphabet).
BayesNet with_initial(const BayesNet& net,
                      const std::map<int, std::vector<Rational>>& alpha);

}  // namespace lumpbn
