#include "lumpbn/search.hpp"

#include <algorithm>
#include <random>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

// Target alphabet for a partition: each class is named after its first
// member.
Alphabet class_alphabet(const Alphabet& source, const std::vector<int>& rgs) {
    const int classes = 1 + *std::max_element(rgs.begin(), rgs.end());
    Alphabet out;
    out.symbols.resize(static_cast<std::size_t>(classes));
    std::vector<bool> named(static_cast<std::size_t>(classes), false);
    for (std::size_t a = 0; a < rgs.size(); ++a) {
        if (!named[static_cast<std::size_t>(rgs[a])]) {
            out.symbols[static_cast<std::size_t>(rgs[a])] = source.symbols[a];
            named[static_cast<std::size_t>(rgs[a])] = true;
        }
    }
    return out;
}

}  // namespace

PartitionIterator::PartitionIterator(int n) : rgs_(static_cast<std::size_t>(n), 0) {
    if (n <= 0) throw DimensionMismatch("partitions need a nonempty ground set");
}

int PartitionIterator::class_count() const {
    return 1 + *std::max_element(rgs_.begin(), rgs_.end());
}

bool PartitionIterator::advance() {
    if (done_) return false;
    for (int i = static_cast<int>(rgs_.size()) - 1; i >= 1; --i) {
        int prefix_max = 0;
        for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs_[static_cast<std::size_t>(j)]);
        if (rgs_[static_cast<std::size_t>(i)] <= prefix_max) {
            ++rgs_[static_cast<std::size_t>(i)];
            std::fill(rgs_.begin() + i + 1, rgs_.end(), 0);
            return true;
        }
    }
    done_ = true;
    return false;
}

std::uint64_t bell_number(int n) {
    if (n < 0) throw DimensionMismatch("bell_number of a negative n");
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.front();
}

std::vector<Lumping> enumerate_lumpings(const BayesNet& net, bool shared,
                                        const EnumerateOptions& opts) {
    net.validate();
    std::vector<Lumping> out;
    if (shared) {
        if (!net.shared_alphabet()) {
            throw IncompatibleLumping("shared enumeration needs a shared alphabet");
        }
        const Alphabet& ab = net.alphabets[0];
        PartitionIterator it(ab.size());
        std::uint64_t seen = 0;
        do {
            if (++seen > opts.partition_budget) {
                throw ModelTooLarge("partition budget exceeded");
            }
            const std::vector<int>& rgs = it.current();
            if (opts.max_classes && it.class_count() > *opts.max_classes) continue;
            if (!opts.include_trivial && it.class_count() == ab.size()) continue;
            Lumping l;
            l.map.assign(net.alphabets.size(), rgs);
            l.targets.assign(net.alphabets.size(), class_alphabet(ab, rgs));
            l.validate_against(net.alphabets);
            out.push_back(std::move(l));
        } while (it.advance());
    } else {
        const std::size_t n = net.alphabets.size();
        std::vector<PartitionIterator> its;
        its.reserve(n);
        for (const auto& ab : net.alphabets) its.emplace_back(ab.size());
        std::uint64_t seen = 0;
        bool more = true;
        while (more) {
            if (++seen > opts.partition_budget) {
                throw ModelTooLarge("partition budget exceeded");
            }
            bool within = true;
            bool trivial = true;
            for (std::size_t v = 0; v < n; ++v) {
                if (opts.max_classes && its[v].class_count() > *opts.max_classes) {
                    within = false;
                }
                if (its[v].class_count() != net.alphabets[v].size()) trivial = false;
            }
            if (within && (opts.include_trivial || !trivial)) {
                Lumping l;
                for (std::size_t v = 0; v < n; ++v) {
                    l.map.push_back(its[v].current());
                    l.targets.push_back(
                        class_alphabet(net.alphabets[v], its[v].current()));
                }
                l.validate_against(net.alphabets);
                out.push_back(std::move(l));
            }
            // odometer over the per-vertex partition iterators, last fastest
            more = false;
            for (int v = static_cast<int>(n) - 1; v >= 0; --v) {
                if (its[static_cast<std::size_t>(v)].advance()) {
                    more = true;
                    break;
                }
                its[static_cast<std::size_t>(v)] =
                    PartitionIterator(net.alphabets[static_cast<std::size_t>(v)].size());
            }
        }
    }
    return out;
}

std::vector<std::pair<Lumping, CheckReport>> search_valid_lumpings(
    const BayesNet& net, Property property, bool shared,
    const EnumerateOptions& enum_opts, const CheckOptions& opts) {
    std::vector<std::pair<Lumping, CheckReport>> out;
    for (const Lumping& l : enumerate_lumpings(net, shared, enum_opts)) {
        CheckReport rep;
        switch (property) {
            case Property::D1: rep = check_d1(net, l, opts); break;
            case Property::D2: rep = check_d2_exact(net, l, opts); break;
            case Property::D3: rep = check_d3(net, l, opts); break;
            case Property::KS: rep = check_kemeny_snell(net, l); break;
        }
        if (rep.holds()) out.emplace_back(l, std::move(rep));
    }
    return out;
}

std::optional<std::pair<BayesNet, CheckReport>> find_d1_counterexample(
    const Dag& dag, const Alphabet& alphabet, const Lumping& lump,
    const CounterexampleOptions& opts) {
    if (dag.size() < 3 || !dag.is_connected()) {
        throw StructuralPreconditionViolated(
            "need a connected DAG with at least 3 vertices");
    }
    if (!structural_profile(dag).merge_counterexample_applicable) {
        throw StructuralPreconditionViolated(
            "no induced 3-vertex subgraph with a mergeable 2-edge skeleton");
    }
    if (lump.vertex_count() != dag.size()) {
        throw StructuralPreconditionViolated("lumping vertex count mismatch");
    }
    for (const auto& m : lump.map) {
        if (m != lump.map[0]) {
            throw StructuralPreconditionViolated("lumping must be shared");
        }
    }
    if (lump.map[0].size() != static_cast<std::size_t>(alphabet.size())) {
        throw StructuralPreconditionViolated("lumping domain mismatch");
    }
    const int kb = lump.targets[0].size();
    if (kb <= 1 || kb >= alphabet.size()) {
        throw StructuralPreconditionViolated(
            "need a proper surjection with more than one class");
    }

    const int k = alphabet.size();
    const int d = opts.denominator;
    if (d < k) throw StructuralPreconditionViolated("denominator below alphabet size");

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> pick(0, k - 1);
    auto random_row = [&]() {
        // k positive parts of d: one unit each, the rest spread uniformly.
        std::vector<int> parts(static_cast<std::size_t>(k), 1);
        for (int u = 0; u < d - k; ++u) ++parts[static_cast<std::size_t>(pick(rng))];
        std::vector<Rational> row(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            row[static_cast<std::size_t>(i)] =
                make_rational(parts[static_cast<std::size_t>(i)], d);
        }
        return row;
    };

    for (int attempt = 0; attempt < opts.attempts; ++attempt) {
        BayesNet net;
        net.dag = dag;
        net.alphabets.assign(static_cast<std::size_t>(dag.size()), alphabet);
        for (int v = 0; v < dag.size(); ++v) {
            Cpt cpt;
            cpt.vertex = v;
            cpt.parent_order = dag.parents(v);
            std::size_t rows = 1;
            for (int p : cpt.parent_order) {
                rows *= static_cast<std::size_t>(net.alphabets[static_cast<std::size_t>(p)].size());
            }
            for (std::size_t r = 0; r < rows; ++r) cpt.rows.push_back(random_row());
            net.cpts.push_back(std::move(cpt));
        }
        net.validate();
        CheckReport rep = check_d1(net, lump, opts.check);
        if (rep.fails()) {
            rep.extra["attempt"] = attempt;
            return std::make_pair(std::move(net), std::move(rep));
        }
    }
    return std::nullopt;
}

}  // namespace lumpbn
