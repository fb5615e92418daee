#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lumpbn/lumping.hpp"
#include "lumpbn/model.hpp"
#include "lumpbn/report.hpp"

namespace lumpbn {

struct CheckOptions {
    std::size_t entry_budget = kDefaultEntryBudget;
    // Cap on point-mass initial states enumerated by the D3 check.
    std::size_t initial_state_budget = 4096;
    // Cap on grid points (3^free_variables) evaluated by the D2 check.
    std::size_t grid_budget = 1u << 20;
};

// Factorisation oracle: holds iff for every v and every assignment over
// nd*(v), P(U_v | U_nd(v)) = P(U_v | U_pa(v)) as a cross-multiplied
// identity. Independent of the pairwise route used by check_d1.
CheckReport factorizes_over(const JointTable& table, const Dag& dag);

// Exact conditional-independence audit of every d-separated triple on the
// joint; exhaustive up to `exhaustive_vertex_bound` vertices, seeded sampling
// above it.
CheckReport verify_global_markov(const BayesNet& net,
                                 int exhaustive_vertex_bound = 6,
                                 std::size_t sampled_trials = 200,
                                 std::uint64_t seed = 1,
                                 const CheckOptions& opts = {});

// (D1): the lumped vector factorises over the same DAG at the net's own
// initial distribution. Pairwise product identity on the pushforward joint;
// parent tuples with singleton preimage are skipped (they hold automatically).
CheckReport check_d1(const BayesNet& net, const Lumping& lump,
                     const CheckOptions& opts = {});

// (D3): exhaustive over all pairs of deterministic initial states.
CheckReport check_d3(const BayesNet& net, const Lumping& lump,
                     const CheckOptions& opts = {});

// (D2): polynomial identity test on a 3-values-per-free-variable grid over
// the source simplices. Each side of the product identity has degree <= 2
// per source entry, so vanishing on the grid implies identical vanishing.
CheckReport check_d2_exact(const BayesNet& net, const Lumping& lump,
                           const CheckOptions& opts = {});

// Kemeny-Snell condition on the CPTs alone: lumped row sums agree across
// parent tuples in the same class. Sufficient for (D3).
CheckReport check_kemeny_snell(const BayesNet& net, const Lumping& lump);

// Kemeny-Snell restricted to depth-one vertices; necessary for (D3).
CheckReport check_depth_one_ks_necessity(const BayesNet& net,
                                         const Lumping& lump);

// Zero-pattern sufficient condition for (D2) on path-union DAGs.
CheckReport check_zero_pattern_d2(const BayesNet& net, const Lumping& lump,
                                  const CheckOptions& opts = {});

// Structured sufficient condition for (D1) on DAGs with dde(pa(v)) = {v}
// and dde(pa2(v)) in pa(v); evaluated at the net's initial distribution.
CheckReport check_structured_suff_d1(const BayesNet& net, const Lumping& lump,
                                     const CheckOptions& opts = {});

// Necessary condition for (D1) at vertices of depth >= 2; cheap filter.
CheckReport check_nec_d1(const BayesNet& net, const Lumping& lump,
                         const CheckOptions& opts = {});

// Searches point-mass initial states (plus caller extras) for a depth>1
// vertex whose lumped CPD depends on the initial distribution. Found =>
// (D2) fails; not found => inconclusive.
CheckReport find_bad_vertices(
    const BayesNet& net, const Lumping& lump,
    const std::vector<std::map<int, std::vector<Rational>>>& extra_initials =
        {},
    const CheckOptions& opts = {});

// The deterministic interior grid over the source simplices used by
// check_d2_exact: 3 values per free simplex coordinate, small enough that
// every combination is a valid distribution.
std::vector<std::map<int, std::vector<Rational>>> initial_grid(
    const BayesNet& net, std::size_t grid_budget);

// Cheapest-first combined run: KS, zero-pattern, nec-D1, D1, D3, D2. Cheaper
// certificates settle later verdicts where an implication applies. Throws
// InternalInconsistency if the final verdicts violate D3 => D2 => D1.
std::vector<CheckReport> check_all(const BayesNet& net, const Lumping& lump,
                                   const CheckOptions& opts = {});

}  // namespace lumpbn
