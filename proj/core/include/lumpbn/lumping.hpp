#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lumpbn/model.hpp"

namespace lumpbn {

// Per-vertex surjections from the source alphabets onto smaller target
// alphabets. The shared-alphabet single-map case is a constructor.
struct Lumping {
    // map[v][source symbol index] -> target symbol index
    std::vector<std::vector<int>> map;
    std::vector<Alphabet> targets;

    static Lumping shared(const std::vector<Alphabet>& source_alphabets,
                          const std::map<std::string, std::string>& symbol_map);
    static Lumping per_vertex(
        const std::vector<Alphabet>& source_alphabets,
        const std::vector<std::map<std::string, std::string>>& symbol_maps);
    static Lumping identity(const std::vector<Alphabet>& source_alphabets);

    int vertex_count() const { return static_cast<int>(map.size()); }
    bool is_trivial() const;  // bijective at every vertex

    // Source symbols mapping to target symbol b at `vertex`; never empty.
    std::vector<int> preimage(int vertex, int b) const;
    bool preimage_is_singleton(int vertex, int b) const;

    // Coordinate-wise image of a (partial) source assignment; -1 passes through.
    std::vector<int> apply(const std::vector<int>& assignment) const;

    // Throws IncompatibleLumping unless sizes and surjectivity line up with
    // the given source alphabets.
    void validate_against(const std::vector<Alphabet>& source_alphabets) const;
};

// first then second; both over the same vertex set.
Lumping compose(const Lumping& first, const Lumping& second);

// Image measure: mass_B(b) = sum of mass_A over the coordinate-wise preimage.
JointTable pushforward(const JointTable& table, const Lumping& lump);

// P(U_v = b_v | U_pa(v) = b_pa) on pushforward(joint(net)); nullopt when the
// conditioning event has zero mass. b_pa follows the CPT parent order.
std::optional<Rational> lumped_cpd(const BayesNet& net, const Lumping& lump,
                                   int v, int b_v,
                                   const std::vector<int>& b_pa);

}  // namespace lumpbn
