#include "lumpbn/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    // both sorted
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Dag::Dag(std::vector<std::string> vertices,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(vertices)) {
    {
        std::set<std::string> seen;
        for (const auto& n : names_) {
            if (!seen.insert(n).second) {
                throw Error("duplicate vertex \"" + n + "\"");
            }
        }
    }
    parents_.resize(names_.size());
    children_.resize(names_.size());
    std::set<std::pair<int, int>> seen_edges;
    for (const auto& [tail, head] : edges) {
        const int t = index_of(tail), h = index_of(head);
        if (t == h) throw Error("self-loop at \"" + tail + "\"");
        if (!seen_edges.insert({t, h}).second) {
            throw Error("duplicate edge " + tail + " -> " + head);
        }
        edges_.emplace_back(t, h);
        children_[t].push_back(h);
        parents_[h].push_back(t);
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    for (auto& c : children_) std::sort(c.begin(), c.end());

    // Kahn with declaration-order tie-break.
    std::vector<int> indeg(size());
    for (int v = 0; v < size(); ++v) indeg[v] = static_cast<int>(parents_[v].size());
    std::set<int> ready;
    for (int v = 0; v < size(); ++v) {
        if (indeg[v] == 0) ready.insert(v);
    }
    while (!ready.empty()) {
        const int v = *ready.begin();
        ready.erase(ready.begin());
        topo_.push_back(v);
        for (int c : children_[v]) {
            if (--indeg[c] == 0) ready.insert(c);
        }
    }
    if (static_cast<int>(topo_.size()) != size()) {
        throw CycleDetected("edge set has a directed cycle");
    }
}

int Dag::index_of(const std::string& name) const {
    for (int v = 0; v < size(); ++v) {
        if (names_[v] == name) return v;
    }
    throw UnknownVertex("unknown vertex \"" + name + "\"");
}

bool Dag::has_edge(int tail, int head) const {
    const auto& c = children_[tail];
    return std::binary_search(c.begin(), c.end(), head);
}

std::vector<int> Dag::source_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v) {
        if (parents_[v].empty()) out.push_back(v);
    }
    return out;
}

std::vector<int> Dag::sink_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v) {
        if (children_[v].empty()) out.push_back(v);
    }
    return out;
}

bool Dag::is_connected() const {
    if (size() == 0) return true;
    std::vector<bool> seen(size(), false);
    std::deque<int> q{0};
    seen[0] = true;
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (const auto& adj : {parents_[v], children_[v]}) {
            for (int w : adj) {
                if (!seen[w]) {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::string Dag::to_dot() const {
    std::ostringstream os;
    os << "digraph dag {\n";
    for (const auto& n : names_) os << "  \"" << n << "\";\n";
    for (const auto& [t, h] : edges_) {
        os << "  \"" << names_[t] << "\" -> \"" << names_[h] << "\";\n";
    }
    os << "}\n";
    return os.str();
}

VertexSets relatives(const Dag& dag, int v) {
    if (v < 0 || v >= dag.size()) throw UnknownVertex("vertex index out of range");
    VertexSets r;
    r.vertex = v;
    r.parents = dag.parents(v);
    r.direct_descendants = dag.children(v);

    std::set<int> pa2;
    for (int p : r.parents) {
        for (int pp : dag.parents(p)) pa2.insert(pp);
    }
    r.parents2.assign(pa2.begin(), pa2.end());

    // descendants: forward closure
    std::set<int> de;
    std::deque<int> q(r.direct_descendants.begin(), r.direct_descendants.end());
    while (!q.empty()) {
        const int w = q.front();
        q.pop_front();
        if (de.insert(w).second) {
            for (int c : dag.children(w)) q.push_back(c);
        }
    }
    r.descendants.assign(de.begin(), de.end());

    // predecessors: backward closure
    std::set<int> pr;
    std::deque<int> qb(r.parents.begin(), r.parents.end());
    while (!qb.empty()) {
        const int w = qb.front();
        qb.pop_front();
        if (pr.insert(w).second) {
            for (int p : dag.parents(w)) qb.push_back(p);
        }
    }
    r.predecessors.assign(pr.begin(), pr.end());

    for (int w = 0; w < dag.size(); ++w) {
        if (w != v && !de.contains(w)) r.non_descendants.push_back(w);
    }

    // depth: longest-path DP over the topological order
    std::vector<int> depth(dag.size(), 0);
    for (int w : dag.topological_order()) {
        for (int p : dag.parents(w)) depth[w] = std::max(depth[w], depth[p] + 1);
    }
    r.depth = depth[v];
    return r;
}

bool d_separates(const Dag& dag, const std::vector<int>& a,
                 const std::vector<int>& b, const std::vector<int>& s) {
    std::set<int> sa(a.begin(), a.end()), sb(b.begin(), b.end()),
        ss(s.begin(), s.end());
    for (int v : sa) {
        if (sb.contains(v) || ss.contains(v)) {
            throw OverlappingSets("a, b, s must be pairwise disjoint");
        }
    }
    for (int v : sb) {
        if (ss.contains(v)) throw OverlappingSets("a, b, s must be pairwise disjoint");
    }

    // Ancestral set of a ∪ b ∪ s.
    std::set<int> anc;
    std::deque<int> q;
    for (const auto* set : {&sa, &sb, &ss}) {
        for (int v : *set) q.push_back(v);
    }
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        if (anc.insert(v).second) {
            for (int p : dag.parents(v)) q.push_back(p);
        }
    }

    // Moralize: skeleton edges plus married parents, restricted to anc.
    std::set<std::pair<int, int>> und;
    auto connect = [&](int x, int y) {
        und.insert({std::min(x, y), std::max(x, y)});
    };
    for (const auto& [t, h] : dag.edges()) {
        if (anc.contains(t) && anc.contains(h)) connect(t, h);
    }
    for (int v : anc) {
        const auto& ps = dag.parents(v);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                if (anc.contains(ps[i]) && anc.contains(ps[j])) {
                    connect(ps[i], ps[j]);
                }
            }
        }
    }

    // Reachability in the moral graph with s removed.
    std::vector<std::vector<int>> adj(dag.size());
    for (const auto& [x, y] : und) {
        if (ss.contains(x) || ss.contains(y)) continue;
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    std::set<int> seen;
    std::deque<int> bfs;
    for (int v : sa) {
        if (anc.contains(v)) {
            bfs.push_back(v);
            seen.insert(v);
        }
    }
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop_front();
        if (sb.contains(v)) return false;
        for (int w : adj[v]) {
            if (seen.insert(w).second) bfs.push_back(w);
        }
    }
    return true;
}

StructuralProfile structural_profile(const Dag& dag) {
    StructuralProfile prof;
    prof.path_union = true;
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.parents(v).size() > 1 || dag.children(v).size() > 1) {
            prof.path_union = false;
            break;
        }
    }

    prof.dde_pa_is_v.resize(dag.size(), true);
    prof.dde_pa2_in_pa.resize(dag.size(), true);
    for (int v = 0; v < dag.size(); ++v) {
        const VertexSets r = relatives(dag, v);
        if (r.depth >= 1) {
            std::set<int> dde_pa;
            for (int p : r.parents) {
                for (int c : dag.children(p)) dde_pa.insert(c);
            }
            prof.dde_pa_is_v[v] = dde_pa == std::set<int>{v};
        }
        if (r.depth >= 2) {
            std::vector<int> dde_pa2;
            {
                std::set<int> tmp;
                for (int p : r.parents2) {
                    for (int c : dag.children(p)) tmp.insert(c);
                }
                dde_pa2.assign(tmp.begin(), tmp.end());
            }
            prof.dde_pa2_in_pa[v] = is_subset(dde_pa2, sorted(r.parents));
        }
    }
    prof.all_dde_conditions = true;
    for (int v = 0; v < dag.size(); ++v) {
        if (!prof.dde_pa_is_v[v] || !prof.dde_pa2_in_pa[v]) {
            prof.all_dde_conditions = false;
        }
    }

    // Induced 3-vertex subgraph: connected with a non-complete skeleton
    // means exactly 2 skeleton edges; not a v-structure means the shared
    // vertex does not receive both edges.
    prof.merge_counterexample_applicable = false;
    const int n = dag.size();
    for (int i = 0; i < n && !prof.merge_counterexample_applicable; ++i) {
        for (int j = i + 1; j < n && !prof.merge_counterexample_applicable; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const int vs[3] = {i, j, k};
                int skel = 0;
                std::vector<std::pair<int, int>> dir;  // directed induced edges
                for (int x = 0; x < 3; ++x) {
                    for (int y = 0; y < 3; ++y) {
                        if (x != y && dag.has_edge(vs[x], vs[y])) {
                            dir.emplace_back(vs[x], vs[y]);
                        }
                    }
                }
                {
                    std::set<std::pair<int, int>> und;
                    for (const auto& [t, h] : dir) {
                        und.insert({std::min(t, h), std::max(t, h)});
                    }
                    skel = static_cast<int>(und.size());
                }
                if (skel != 2) continue;  // complete or disconnected
                // Shared vertex of the two skeleton edges.
                int count[3] = {0, 0, 0}, in[3] = {0, 0, 0};
                for (const auto& [t, h] : dir) {
                    for (int x = 0; x < 3; ++x) {
                        if (vs[x] == t) ++count[x];
                        if (vs[x] == h) {
                            ++count[x];
                            ++in[x];
                        }
                    }
                }
                for (int x = 0; x < 3; ++x) {
                    if (count[x] == 2 && in[x] != 2) {
                        prof.merge_counterexample_applicable = true;
                        break;
                    }
                }
                if (prof.merge_counterexample_applicable) break;
            }
        }
    }
    return prof;
}

Skeleton skeleton_and_immoralities(const Dag& dag) {
    Skeleton sk;
    std::set<std::pair<int, int>> und;
    for (const auto& [t, h] : dag.edges()) {
        und.insert({std::min(t, h), std::max(t, h)});
    }
    sk.edges.assign(und.begin(), und.end());
    for (int c = 0; c < dag.size(); ++c) {
        const auto& ps = dag.parents(c);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                const int a = ps[i], b = ps[j];
                if (!und.contains({std::min(a, b), std::max(a, b)})) {
                    sk.v_structures.push_back({a, c, b});
                }
            }
        }
    }
    std::sort(sk.v_structures.begin(), sk.v_structures.end());
    return sk;
}

bool markov_equivalent(const Dag& g1, const Dag& g2) {
    if (g1.vertex_names() != g2.vertex_names()) return false;
    return skeleton_and_immoralities(g1) == skeleton_and_immoralities(g2);
}

}  // namespace lumpbn
