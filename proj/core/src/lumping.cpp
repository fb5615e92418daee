#include "lumpbn/lumping.hpp"

#include <algorithm>
#include <set>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

// Target alphabet from a symbol map, ordered by first occurrence of each
// target over the source order.
std::pair<std::vector<int>, Alphabet> compile_map(
    const Alphabet& source, const std::map<std::string, std::string>& m) {
    std::vector<int> out(source.size(), -1);
    Alphabet target;
    for (int a = 0; a < source.size(); ++a) {
        const auto it = m.find(source.symbols[a]);
        if (it == m.end()) {
            throw IncompatibleLumping("no image for symbol \"" +
                                      source.symbols[a] + "\"");
        }
        int b = -1;
        for (int i = 0; i < target.size(); ++i) {
            if (target.symbols[i] == it->second) b = i;
        }
        if (b < 0) {
            target.symbols.push_back(it->second);
            b = target.size() - 1;
        }
        out[a] = b;
    }
    if (m.size() != static_cast<std::size_t>(source.size())) {
        throw IncompatibleLumping("lumping maps symbols outside the alphabet");
    }
    return {out, target};
}

}  // namespace

Lumping Lumping::shared(const std::vector<Alphabet>& source_alphabets,
                        const std::map<std::string, std::string>& symbol_map) {
    Lumping l;
    for (const auto& ab : source_alphabets) {
        if (ab != source_alphabets[0]) {
            throw IncompatibleLumping(
                "shared lumping requires a shared alphabet");
        }
        auto [m, t] = compile_map(ab, symbol_map);
        l.map.push_back(std::move(m));
        l.targets.push_back(std::move(t));
    }
    l.validate_against(source_alphabets);
    return l;
}

Lumping Lumping::per_vertex(
    const std::vector<Alphabet>& source_alphabets,
    const std::vector<std::map<std::string, std::string>>& symbol_maps) {
    if (symbol_maps.size() != source_alphabets.size()) {
        throw IncompatibleLumping("one symbol map per vertex required");
    }
    Lumping l;
    for (std::size_t v = 0; v < source_alphabets.size(); ++v) {
        auto [m, t] = compile_map(source_alphabets[v], symbol_maps[v]);
        l.map.push_back(std::move(m));
        l.targets.push_back(std::move(t));
    }
    l.validate_against(source_alphabets);
    return l;
}

Lumping Lumping::identity(const std::vector<Alphabet>& source_alphabets) {
    Lumping l;
    for (const auto& ab : source_alphabets) {
        std::vector<int> m(ab.size());
        for (int i = 0; i < ab.size(); ++i) m[i] = i;
        l.map.push_back(std::move(m));
        l.targets.push_back(ab);
    }
    return l;
}

bool Lumping::is_trivial() const {
    for (std::size_t v = 0; v < map.size(); ++v) {
        if (targets[v].size() != static_cast<int>(map[v].size())) return false;
    }
    return true;
}

std::vector<int> Lumping::preimage(int vertex, int b) const {
    if (b < 0 || b >= targets[vertex].size()) {
        throw UnknownSymbol("target symbol index out of range");
    }
    std::vector<int> out;
    for (std::size_t a = 0; a < map[vertex].size(); ++a) {
        if (map[vertex][a] == b) out.push_back(static_cast<int>(a));
    }
    return out;
}

bool Lumping::preimage_is_singleton(int vertex, int b) const {
    int count = 0;
    for (int t : map[vertex]) {
        if (t == b && ++count > 1) return false;
    }
    return count == 1;
}

std::vector<int> Lumping::apply(const std::vector<int>& assignment) const {
    std::vector<int> out(assignment.size(), -1);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        if (assignment[v] >= 0) out[v] = map[v][assignment[v]];
    }
    return out;
}

void Lumping::validate_against(
    const std::vector<Alphabet>& source_alphabets) const {
    if (map.size() != source_alphabets.size() || targets.size() != map.size()) {
        throw IncompatibleLumping("lumping vertex count mismatch");
    }
    for (std::size_t v = 0; v < map.size(); ++v) {
        if (map[v].size() != static_cast<std::size_t>(source_alphabets[v].size())) {
            throw IncompatibleLumping("lumping domain size mismatch");
        }
        std::set<int> hit;
        for (int b : map[v]) {
            if (b < 0 || b >= targets[v].size()) {
                throw IncompatibleLumping("lumping image out of range");
            }
            hit.insert(b);
        }
        if (static_cast<int>(hit.size()) != targets[v].size()) {
            throw IncompatibleLumping("lumping not surjective");
        }
    }
}

Lumping compose(const Lumping& first, const Lumping& second) {
    if (first.map.size() != second.map.size()) {
        throw IncompatibleLumping("compose: vertex count mismatch");
    }
    Lumping out;
    out.targets = second.targets;
    for (std::size_t v = 0; v < first.map.size(); ++v) {
        if (second.map[v].size() !=
            static_cast<std::size_t>(first.targets[v].size())) {
            throw IncompatibleLumping("compose: alphabet mismatch at vertex " +
                                      std::to_string(v));
        }
        std::vector<int> m(first.map[v].size());
        for (std::size_t a = 0; a < m.size(); ++a) {
            m[a] = second.map[v][first.map[v][a]];
        }
        out.map.push_back(std::move(m));
    }
    return out;
}

JointTable pushforward(const JointTable& table, const Lumping& lump) {
    if (lump.map.size() != table.scope.size()) {
        throw DimensionMismatch("pushforward: scope size mismatch");
    }
    for (std::size_t v = 0; v < table.scope.size(); ++v) {
        if (lump.map[v].size() !=
            static_cast<std::size_t>(table.alphabets[v].size())) {
            throw DimensionMismatch("pushforward: alphabet size mismatch");
        }
    }
    JointTable out;
    out.scope = table.scope;
    out.alphabets = lump.targets;
    out.mass.assign(out.table_size(), Rational(0));
    std::vector<int> a(table.scope.size(), 0);
    std::vector<int> b(table.scope.size(), 0);
    std::size_t idx = 0;
    do {
        for (std::size_t v = 0; v < a.size(); ++v) b[v] = lump.map[v][a[v]];
        out.mass[out.index_of(b)] += table.mass[idx];
        ++idx;
    } while (table.next_assignment(a));
    return out;
}

std::optional<Rational> lumped_cpd(const BayesNet& net, const Lumping& lump,
                                   int v, int b_v,
                                   const std::vector<int>& b_pa) {
    const JointTable pj = pushforward(joint(net), lump);
    std::vector<int> target(pj.scope.size(), -1), given(pj.scope.size(), -1);
    target[v] = b_v;
    const auto& parents = net.cpts[v].parent_order;
    if (b_pa.size() != parents.size()) {
        throw DimensionMismatch("lumped_cpd: wrong parent tuple length");
    }
    for (std::size_t i = 0; i < parents.size(); ++i) given[parents[i]] = b_pa[i];
    return conditional(pj, target, given);
}

}  // namespace lumpbn
