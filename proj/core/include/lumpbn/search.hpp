#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lumpbn/checkers.hpp"
#include "lumpbn/lumping.hpp"
#include "lumpbn/model.hpp"

namespace lumpbn {

// Enumerates set partitions of {0..n-1} as restricted-growth strings in
// canonical order; each partition appears exactly once.
class PartitionIterator {
  public:
    explicit PartitionIterator(int n);

    // Current partition as class index per element (a restricted-growth
    // string: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1])).
    const std::vector<int>& current() const { return rgs_; }
    int class_count() const;
    bool advance();  // false once exhausted

  private:
    std::vector<int> rgs_;
    bool done_ = false;
};

std::uint64_t bell_number(int n);

struct EnumerateOptions {
    bool include_trivial = false;      // all-singletons partition
    std::optional<int> max_classes;    // upper bound on target classes
    std::uint64_t partition_budget = 100'000;
};

// shared=true: one partition of the common alphabet applied at every vertex.
// shared=false: the product space of per-vertex partitions (budget-guarded).
std::vector<Lumping> enumerate_lumpings(const BayesNet& net, bool shared,
                                        const EnumerateOptions& opts = {});

enum class Property { D1, D2, D3, KS };

// All enumerated lumpings for which the requested checker holds, in
// canonical enumeration order, each with its report.
std::vector<std::pair<Lumping, CheckReport>> search_valid_lumpings(
    const BayesNet& net, Property property, bool shared,
    const EnumerateOptions& enum_opts = {}, const CheckOptions& opts = {});

struct CounterexampleOptions {
    int attempts = 1000;
    std::uint64_t seed = 1;
    // CPT entries are sampled as k positive parts of this denominator.
    int denominator = 12;
    CheckOptions check;
};

// Samples positive-rational nets on `dag` until check_d1 fails under `lump`.
// Deterministic given the seed; nullopt after `attempts` failures. Throws
// StructuralPreconditionViolated unless the DAG is connected with >= 3
// vertices, has an applicable induced 3-vertex subgraph, and the lumping is
// a proper shared surjection with |B| > 1.
std::optional<std::pair<BayesNet, CheckReport>> find_d1_counterexample(
    const Dag& dag, const Alphabet& alphabet, const Lumping& lump,
    const CounterexampleOptions& opts = {});

}  // namespace lumpbn
