#include "lumpbn/model.hpp"

#include <algorithm>

#include "lumpbn/errors.hpp"

namespace lumpbn {

int Alphabet::index_of(const std::string& symbol) const {
    for (int i = 0; i < size(); ++i) {
        if (symbols[i] == symbol) return i;
    }
    throw UnknownSymbol("unknown symbol \"" + symbol + "\"");
}

void BayesNet::validate() const {
    const int n = dag.size();
    if (static_cast<int>(alphabets.size()) != n ||
        static_cast<int>(cpts.size()) != n) {
        throw DimensionMismatch("alphabets/cpts count does not match vertices");
    }
    for (int v = 0; v < n; ++v) {
        const Alphabet& ab = alphabets[v];
        if (ab.size() == 0) throw Error("empty alphabet at " + dag.name(v));
        {
            std::vector<std::string> s = ab.symbols;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
                throw Error("duplicate symbol at " + dag.name(v));
            }
        }
        const Cpt& cpt = cpts[v];
        if (cpt.vertex != v) throw Error("cpt/vertex index mismatch");
        if (cpt.parent_order != dag.parents(v)) {
            throw Error("cpt parent order does not match dag parents at " +
                        dag.name(v));
        }
        std::size_t expected_rows = 1;
        for (int p : cpt.parent_order) {
            expected_rows *= static_cast<std::size_t>(alphabets[p].size());
        }
        if (cpt.rows.size() != expected_rows) {
            throw DimensionMismatch("wrong row count at " + dag.name(v));
        }
        for (const auto& row : cpt.rows) {
            if (static_cast<int>(row.size()) != ab.size()) {
                throw DimensionMismatch("wrong row width at " + dag.name(v));
            }
            Rational sum = 0;
            for (const Rational& x : row) {
                if (x < 0) throw Error("negative probability at " + dag.name(v));
                sum += x;
            }
            if (sum != 1) {
                throw Error("row does not sum to 1 at " + dag.name(v) +
                            " (sum = " + to_string(sum) + ")");
            }
        }
    }
}

bool BayesNet::shared_alphabet() const {
    for (std::size_t v = 1; v < alphabets.size(); ++v) {
        if (alphabets[v] != alphabets[0]) return false;
    }
    return true;
}

std::size_t BayesNet::cpt_row_index(int v,
                                    const std::vector<int>& assignment) const {
    std::size_t idx = 0;
    for (int p : cpts[v].parent_order) {
        idx = idx * static_cast<std::size_t>(alphabets[p].size()) +
              static_cast<std::size_t>(assignment[p]);
    }
    return idx;
}

const Rational& BayesNet::cpt_entry(int v,
                                    const std::vector<int>& assignment) const {
    return cpts[v].rows[cpt_row_index(v, assignment)][assignment[v]];
}

std::size_t JointTable::table_size() const {
    std::size_t n = 1;
    for (const auto& ab : alphabets) n *= static_cast<std::size_t>(ab.size());
    return n;
}

std::size_t JointTable::index_of(const std::vector<int>& assignment) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < alphabets.size(); ++i) {
        idx = idx * static_cast<std::size_t>(alphabets[i].size()) +
              static_cast<std::size_t>(assignment[i]);
    }
    return idx;
}

bool JointTable::next_assignment(std::vector<int>& assignment) const {
    for (int i = static_cast<int>(assignment.size()) - 1; i >= 0; --i) {
        if (++assignment[i] < alphabets[i].size()) return true;
        assignment[i] = 0;
    }
    return false;
}

Rational JointTable::event_mass(const std::vector<int>& partial) const {
    Rational total = 0;
    std::vector<int> a(scope.size(), 0);
    std::size_t idx = 0;
    do {
        bool match = true;
        for (std::size_t i = 0; i < partial.size(); ++i) {
            if (partial[i] >= 0 && partial[i] != a[i]) {
                match = false;
                break;
            }
        }
        if (match) total += mass[idx];
        ++idx;
    } while (next_assignment(a));
    return total;
}

int JointTable::position_of(const std::string& vertex) const {
    for (std::size_t i = 0; i < scope.size(); ++i) {
        if (scope[i] == vertex) return static_cast<int>(i);
    }
    throw UnknownVertex("vertex \"" + vertex + "\" not in scope");
}

JointTable joint(const BayesNet& net, std::size_t entry_budget) {
    net.validate();
    JointTable t;
    t.scope = net.dag.vertex_names();
    t.alphabets = net.alphabets;
    const std::size_t n = t.table_size();
    if (n > entry_budget) {
        throw ModelTooLarge("joint table would need " + std::to_string(n) +
                            " entries (budget " + std::to_string(entry_budget) +
                            ")");
    }
    t.mass.resize(n);
    std::vector<int> a(t.scope.size(), 0);
    std::size_t idx = 0;
    do {
        Rational m = 1;
        for (int v = 0; v < net.dag.size(); ++v) m *= net.cpt_entry(v, a);
        t.mass[idx++] = m;
    } while (t.next_assignment(a));
    return t;
}

JointTable marginal_positions(const JointTable& table,
                              const std::vector<int>& positions) {
    std::vector<int> pos = positions;
    std::sort(pos.begin(), pos.end());
    for (int p : pos) {
        if (p < 0 || p >= static_cast<int>(table.scope.size())) {
            throw UnknownVertex("marginal position out of range");
        }
    }
    JointTable out;
    for (int p : pos) {
        out.scope.push_back(table.scope[p]);
        out.alphabets.push_back(table.alphabets[p]);
    }
    out.mass.assign(out.table_size(), Rational(0));
    std::vector<int> a(table.scope.size(), 0);
    std::vector<int> sub(pos.size(), 0);
    std::size_t idx = 0;
    do {
        for (std::size_t i = 0; i < pos.size(); ++i) sub[i] = a[pos[i]];
        out.mass[out.index_of(sub)] += table.mass[idx];
        ++idx;
    } while (table.next_assignment(a));
    return out;
}

JointTable marginal(const JointTable& table,
                    const std::vector<std::string>& subset) {
    std::vector<int> pos;
    pos.reserve(subset.size());
    for (const auto& name : subset) pos.push_back(table.position_of(name));
    return marginal_positions(table, pos);
}

std::optional<Rational> conditional(const JointTable& table,
                                    const std::vector<int>& target,
                                    const std::vector<int>& given) {
    std::vector<int> both(table.scope.size(), -1);
    for (std::size_t i = 0; i < table.scope.size(); ++i) {
        if (target[i] >= 0 && given[i] >= 0) {
            throw OverlappingSets("target and given overlap");
        }
        both[i] = target[i] >= 0 ? target[i] : given[i];
    }
    const Rational den = table.event_mass(given);
    if (den == 0) return std::nullopt;
    return table.event_mass(both) / den;
}

bool has_full_support(const BayesNet& net, std::size_t entry_budget) {
    const JointTable t = joint(net, entry_budget);
    return std::all_of(t.mass.begin(), t.mass.end(),
                       [](const Rational& m) { return m > 0; });
}

BayesNet with_initial(const BayesNet& net,
                      const std::map<int, std::vector<Rational>>& alpha) {
    BayesNet out = net;
    for (const auto& [v, dist] : alpha) {
        if (v < 0 || v >= net.dag.size() || !net.dag.parents(v).empty()) {
            throw DimensionMismatch("with_initial: not a source vertex");
        }
        if (static_cast<int>(dist.size()) != net.alphabets[v].size()) {
            throw DimensionMismatch("with_initial: wrong vector length at " +
                                    net.dag.name(v));
        }
        out.cpts[v].rows[0] = dist;
    }
    out.validate();
    return out;
}

}  // namespace lumpbn
