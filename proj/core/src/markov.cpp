#include "lumpbn/markov.hpp"

#include <map>

#include "lumpbn/errors.hpp"

namespace lumpbn {

namespace {

std::string step_name(int t) { return "x" + std::to_string(t); }

// The same per-state map applied at every chain vertex.
Lumping chain_lumping(const Lumping& lump, int horizon) {
    if (lump.map.empty()) throw IncompatibleLumping("empty lumping");
    Lumping out;
    out.map.assign(static_cast<std::size_t>(horizon), lump.map[0]);
    out.targets.assign(static_cast<std::size_t>(horizon), lump.targets[0]);
    return out;
}

}  // namespace

void StochasticMatrix::validate() const {
    const int k = states.size();
    if (k == 0) throw DimensionMismatch("empty state space");
    if (static_cast<int>(rows.size()) != k) {
        throw DimensionMismatch("matrix is not square");
    }
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != k) {
            throw DimensionMismatch("matrix is not square");
        }
        Rational sum = 0;
        for (const Rational& x : row) {
            if (x < 0) throw Error("negative transition probability");
            sum += x;
        }
        if (sum != 1) throw Error("row does not sum to 1");
    }
}

BayesNet unroll_nhdtmc(const std::vector<StochasticMatrix>& ps,
                       const std::vector<Rational>& initial) {
    if (ps.empty()) throw DimensionMismatch("need at least one transition matrix");
    for (const auto& p : ps) {
        p.validate();
        if (p.states != ps[0].states) {
            throw DimensionMismatch("all matrices must share a state space");
        }
    }
    const int horizon = static_cast<int>(ps.size()) + 1;
    if (static_cast<int>(initial.size()) != ps[0].states.size()) {
        throw DimensionMismatch("initial distribution has the wrong length");
    }

    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int t = 1; t <= horizon; ++t) names.push_back(step_name(t));
    for (int t = 1; t < horizon; ++t) edges.emplace_back(step_name(t), step_name(t + 1));

    BayesNet net;
    net.dag = Dag(names, edges);
    net.alphabets.assign(static_cast<std::size_t>(horizon), ps[0].states);
    for (int t = 0; t < horizon; ++t) {
        Cpt cpt;
        cpt.vertex = t;
        cpt.parent_order = net.dag.parents(t);
        cpt.rows = (t == 0) ? std::vector<std::vector<Rational>>{initial}
                            : ps[static_cast<std::size_t>(t) - 1].rows;
        net.cpts.push_back(std::move(cpt));
    }
    net.validate();
    return net;
}

BayesNet unroll_dtmc(const StochasticMatrix& p,
                     const std::vector<Rational>& initial, int horizon) {
    if (horizon < 2) throw DimensionMismatch("horizon must be at least 2");
    return unroll_nhdtmc(
        std::vector<StochasticMatrix>(static_cast<std::size_t>(horizon) - 1, p),
        initial);
}

BayesNet unroll_higher_order(const Alphabet& states,
                             const std::vector<std::vector<Rational>>& p2,
                             const std::vector<Rational>& initial_pair,
                             int horizon) {
    const int k = states.size();
    if (horizon < 2) throw DimensionMismatch("horizon must be at least 2");
    if (static_cast<int>(p2.size()) != k * k ||
        static_cast<int>(initial_pair.size()) != k * k) {
        throw DimensionMismatch("order-2 tables need k^2 rows/entries");
    }

    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int t = 1; t <= horizon; ++t) names.push_back(step_name(t));
    edges.emplace_back(step_name(1), step_name(2));
    for (int t = 3; t <= horizon; ++t) {
        edges.emplace_back(step_name(t - 2), step_name(t));
        edges.emplace_back(step_name(t - 1), step_name(t));
    }

    BayesNet net;
    net.dag = Dag(names, edges);
    net.alphabets.assign(static_cast<std::size_t>(horizon), states);

    std::vector<Rational> first_marginal(k, Rational(0));
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) first_marginal[a] += initial_pair[a * k + b];
    }
    for (int t = 0; t < horizon; ++t) {
        Cpt cpt;
        cpt.vertex = t;
        cpt.parent_order = net.dag.parents(t);
        if (t == 0) {
            cpt.rows = {first_marginal};
        } else if (t == 1) {
            for (int a = 0; a < k; ++a) {
                std::vector<Rational> row(k);
                if (first_marginal[a] == 0) {
                    // unreachable row; any distribution works
                    row.assign(static_cast<std::size_t>(k), Rational(1, k));
                } else {
                    for (int b = 0; b < k; ++b) {
                        row[b] = initial_pair[a * k + b] / first_marginal[a];
                    }
                }
                cpt.rows.push_back(std::move(row));
            }
        } else {
            // parent order is (t-2, t-1): older state most significant,
            // matching the p2 row indexing.
            cpt.rows = p2;
        }
        net.cpts.push_back(std::move(cpt));
    }
    net.validate();
    return net;
}

CheckReport strong_lumpability(const StochasticMatrix& p, const Lumping& lump) {
    p.validate();
    if (lump.map.empty() ||
        lump.map[0].size() != static_cast<std::size_t>(p.states.size())) {
        throw IncompatibleLumping("lumping does not match the state space");
    }
    const std::vector<int>& f = lump.map[0];
    const Alphabet& targets = lump.targets[0];
    const int k = p.states.size();
    const int kb = targets.size();

    auto row_sum = [&](int i, int c) {
        Rational sum = 0;
        for (int l = 0; l < k; ++l) {
            if (f[l] == c) sum += p.rows[i][l];
        }
        return sum;
    };

    CheckReport rep;
    rep.property = "strong-lumpability";
    for (int b = 0; b < kb; ++b) {
        int rep_state = -1;
        for (int i = 0; i < k; ++i) {
            if (f[i] != b) continue;
            if (rep_state < 0) {
                rep_state = i;
                continue;
            }
            for (int c = 0; c < kb; ++c) {
                const Rational lhs = row_sum(rep_state, c);
                const Rational rhs = row_sum(i, c);
                ++rep.instances_checked;
                if (lhs != rhs) {
                    Witness wit;
                    wit.vertex = targets.symbols[b];
                    wit.lhs = lhs;
                    wit.rhs = rhs;
                    wit.detail["state_1"] = p.states.symbols[rep_state];
                    wit.detail["state_2"] = p.states.symbols[i];
                    wit.detail["target_class"] = targets.symbols[c];
                    rep.witness = wit;
                    rep.verdict = Verdict::fails;
                    return rep;
                }
            }
        }
    }
    nlohmann::json quotient = nlohmann::json::array();
    for (int b = 0; b < kb; ++b) {
        int rep_state = 0;
        while (f[rep_state] != b) ++rep_state;
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < kb; ++c) row.push_back(to_string(row_sum(rep_state, c)));
        quotient.push_back(row);
    }
    rep.extra["quotient_states"] = targets.symbols;
    rep.extra["quotient_matrix"] = quotient;
    rep.verdict = Verdict::holds;
    rep.certificate =
        "lumped row sums agree within every class (Kemeny-Snell on the matrix)";
    return rep;
}

CheckReport weak_lumpability_horizon(const StochasticMatrix& p,
                                     const std::vector<Rational>& initial,
                                     const Lumping& lump, int horizon,
                                     const CheckOptions& opts) {
    const BayesNet net = unroll_dtmc(p, initial, horizon);
    const Lumping chain = chain_lumping(lump, horizon);
    CheckReport rep = check_d1(net, chain, opts);
    rep.property = "weak-lumpability";

    // Extracted time-indexed lumped transition tables P(U_t | U_{t-1}).
    const JointTable pj = pushforward(joint(net, opts.entry_budget), chain);
    const int kb = chain.targets[0].size();
    nlohmann::json tables = nlohmann::json::array();
    bool all_defined = true;
    std::vector<std::vector<std::optional<Rational>>> numeric;
    for (int t = 1; t < horizon; ++t) {
        nlohmann::json table = nlohmann::json::array();
        std::vector<std::optional<Rational>> flat;
        for (int b_prev = 0; b_prev < kb; ++b_prev) {
            nlohmann::json row = nlohmann::json::array();
            for (int b = 0; b < kb; ++b) {
                std::vector<int> target(static_cast<std::size_t>(horizon), -1);
                std::vector<int> given(static_cast<std::size_t>(horizon), -1);
                target[t] = b;
                given[t - 1] = b_prev;
                const auto val = conditional(pj, target, given);
                if (val) {
                    row.push_back(to_string(*val));
                } else {
                    row.push_back(nullptr);
                    all_defined = false;
                }
                flat.push_back(val);
            }
            table.push_back(row);
        }
        tables.push_back(table);
        numeric.push_back(std::move(flat));
    }
    bool time_constant = all_defined;
    for (std::size_t s = 1; s < numeric.size() && time_constant; ++s) {
        if (numeric[s] != numeric[0]) time_constant = false;
    }
    rep.extra["lumped_states"] = chain.targets[0].symbols;
    rep.extra["lumped_tables"] = tables;
    rep.extra["time_constant"] = time_constant;
    // the lumped process is itself a DTMC only when the tables are
    // time-constant (and the factorisation holds at all)
    rep.extra["dtmc"] = rep.holds() && time_constant;
    return rep;
}

CheckReport nhdtmc_d2_cpd_consistency(const std::vector<StochasticMatrix>& ps,
                                      const Lumping& lump, int horizon,
                                      const CheckOptions& opts) {
    if (horizon != static_cast<int>(ps.size()) + 1) {
        throw DimensionMismatch("horizon must equal matrix count + 1");
    }
    const int k = ps[0].states.size();
    const std::vector<Rational> uniform(static_cast<std::size_t>(k),
                                        Rational(1, k));
    const BayesNet net = unroll_nhdtmc(ps, uniform);
    const Lumping chain = chain_lumping(lump, horizon);

    CheckReport rep = check_d2_exact(net, chain, opts);
    rep.property = "nhdtmc-d2-cpd";
    if (!rep.holds()) return rep;

    // D2 holds; the lumped step tables must not depend on the initial
    // distribution.
    std::vector<std::map<int, std::vector<Rational>>> initials;
    for (int a = 0; a < k; ++a) {
        std::vector<Rational> point(static_cast<std::size_t>(k), Rational(0));
        point[static_cast<std::size_t>(a)] = 1;
        initials.push_back({{0, point}});
    }
    for (auto& g : initial_grid(net, opts.grid_budget)) initials.push_back(g);

    const int kb = chain.targets[0].size();
    std::map<std::vector<int>, Rational> seen;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& alpha : initials) {
        const JointTable pj =
            pushforward(joint(with_initial(net, alpha), opts.entry_budget), chain);
        for (int t = 1; t < horizon; ++t) {
            for (int b_prev = 0; b_prev < kb; ++b_prev) {
                for (int b = 0; b < kb; ++b) {
                    std::vector<int> target(static_cast<std::size_t>(horizon), -1);
                    std::vector<int> given(static_cast<std::size_t>(horizon), -1);
                    target[t] = b;
                    given[t - 1] = b_prev;
                    const auto val = conditional(pj, target, given);
                    ++rep.instances_checked;
                    if (!val) continue;
                    const std::vector<int> key{t, b_prev, b};
                    const auto it = seen.find(key);
                    if (it == seen.end()) {
                        seen.emplace(key, *val);
                    } else if (it->second != *val) {
                        throw InternalInconsistency(
                            "D2 holds but a lumped step table depends on the "
                            "initial distribution");
                    }
                }
            }
        }
    }
    for (int t = 1; t < horizon; ++t) {
        nlohmann::json table = nlohmann::json::array();
        for (int b_prev = 0; b_prev < kb; ++b_prev) {
            nlohmann::json row = nlohmann::json::array();
            for (int b = 0; b < kb; ++b) {
                const auto it = seen.find({t, b_prev, b});
                if (it == seen.end()) {
                    row.push_back(nullptr);
                } else {
                    row.push_back(to_string(it->second));
                }
            }
            table.push_back(row);
        }
        tables.push_back(table);
    }
    rep.extra["lumped_states"] = chain.targets[0].symbols;
    rep.extra["lumped_tables"] = tables;
    rep.verdict = Verdict::holds;
    rep.certificate =
        "D2 holds and the lumped step tables agree across point-mass and grid "
        "initial distributions";
    return rep;
}

}  // namespace lumpbn
