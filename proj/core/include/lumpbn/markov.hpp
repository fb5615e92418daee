#pragma once

#include <vector>

#include "lumpbn/checkers.hpp"
#include "lumpbn/lumping.hpp"
#include "lumpbn/model.hpp"

namespace lumpbn {

struct StochasticMatrix {
    Alphabet states;
    std::vector<std::vector<Rational>> rows;

    void validate() const;  // square, rows sum to exactly 1, entries >= 0
};

// Chain DAG x1 -> x2 -> ... -> x{horizon}; every edge carries `p`.
BayesNet unroll_dtmc(const StochasticMatrix& p,
                     const std::vector<Rational>& initial, int horizon);

// Chain with time-varying CPTs; ps[n] governs the edge into vertex n+2.
BayesNet unroll_nhdtmc(const std::vector<StochasticMatrix>& ps,
                       const std::vector<Rational>& initial);

// Order-2 chain: edges from t-1 and t-2 into t. `p2` has one row per
// (older, newer) state pair, older state most significant; `initial_pair`
// is the joint distribution of the first two variables, same indexing.
BayesNet unroll_higher_order(const Alphabet& states,
                             const std::vector<std::vector<Rational>>& p2,
                             const std::vector<Rational>& initial_pair,
                             int horizon);

// Single-alphabet lumping of a transition matrix into the quotient chain.
// Holds iff lumped row sums agree within every class (Kemeny-Snell on the
// matrix); the quotient matrix is attached as certificate data.
CheckReport strong_lumpability(const StochasticMatrix& p, const Lumping& lump);

// check_d1 on the unrolled chain: holds means the lumped process is an
// NHDTMC up to the horizon. The report carries the extracted time-indexed
// lumped transition tables and whether they are time-constant.
CheckReport weak_lumpability_horizon(const StochasticMatrix& p,
                                     const std::vector<Rational>& initial,
                                     const Lumping& lump, int horizon,
                                     const CheckOptions& opts = {});

// For an unrolled NHDTMC satisfying check_d2_exact, verifies the lumped
// CPDs at n >= 2 agree across all point-mass and grid initial
// distributions. Disagreement while (D2) holds throws
// InternalInconsistency.
CheckReport nhdtmc_d2_cpd_consistency(const std::vector<StochasticMatrix>& ps,
                                      const Lumping& lump, int horizon,
                                      const CheckOptions& opts = {});

}  // namespace lumpbn
