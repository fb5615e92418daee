#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace lumpbn {

// Finite DAG over named vertices. Vertices are referred to by their index in
// declaration order; names appear only at the API boundary. Construction
// validates acyclicity, so every Dag in flight is well formed.
class Dag {
  public:
    Dag() = default;  // empty graph, useful as a placeholder before assignment
    Dag(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& name(int v) const { return names_[v]; }
    int index_of(const std::string& name) const;  // throws UnknownVertex

    bool has_edge(int tail, int head) const;
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& parents(int v) const { return parents_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }

    // Stable Kahn order: ties broken by declaration order.
    std::vector<int> topological_order() const { return topo_; }

    std::vector<int> source_vertices() const;
    std::vector<int> sink_vertices() const;
    bool is_connected() const;  // as an undirected graph

    std::string to_dot() const;

  private:
    std::vector<std::string> names_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> parents_;   // sorted
    std::vector<std::vector<int>> children_;  // sorted
    std::vector<int> topo_;
};

// All §-style graph relatives of one vertex. Sets are sorted vertex indices.
struct VertexSets {
    int vertex = -1;
    std::vector<int> parents;
    std::vector<int> parents2;  // parents of parents
    std::vector<int> descendants;
    std::vector<int> direct_descendants;
    std::vector<int> non_descendants;
    std::vector<int> predecessors;
    int depth = 0;  // longest directed path from any source
};

VertexSets relatives(const Dag& dag, int v);

// True iff s blocks every undirected path between a and b. The three sets
// must be pairwise disjoint. Implemented via the moralized ancestral graph,
// exact for any DAG.
bool d_separates(const Dag& dag, const std::vector<int>& a,
                 const std::vector<int>& b, const std::vector<int>& s);

struct StructuralProfile {
    bool path_union = false;  // all in- and out-degrees <= 1
    // Per vertex: dde(pa(v)) == {v}; vacuously true at sources.
    std::vector<bool> dde_pa_is_v;
    // Per vertex: dde(pa2(v)) subset of pa(v); vacuously true when depth < 2.
    std::vector<bool> dde_pa2_in_pa;
    bool all_dde_conditions = false;
    // Some connected induced 3-vertex subgraph has a non-complete skeleton
    // and is not a v-structure.
    bool merge_counterexample_applicable = false;
};

StructuralProfile structural_profile(const Dag& dag);

struct Skeleton {
    std::vector<std::pair<int, int>> edges;  // (min,max), sorted
    // v-structures a -> c <- b with a, b non-adjacent, stored (a, c, b), a < b.
    std::vector<std::array<int, 3>> v_structures;
    bool operator==(const Skeleton&) const = default;
};

Skeleton skeleton_and_immoralities(const Dag& dag);

// Same vertex names, same skeleton, same immoralities.
bool markov_equivalent(const Dag& g1, const Dag& g2);

}  // namespace lumpbn
