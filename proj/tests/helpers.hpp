#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lumpbn/markov.hpp"
#include "lumpbn/model.hpp"
#include "lumpbn/lumping.hpp"

namespace testutil {

using namespace lumpbn;

inline Alphabet abc() { return Alphabet{{"a1", "a2", "a3"}}; }

inline Rational q(const char* s) { return parse_rational(s); }

// v1 -> v2 over {a1,a2,a3}; v2 rows (1/2,1/2,0),(0,1/2,1/2),(1/2,1/2,0).
inline BayesNet simple_ex(const std::vector<Rational>& initial = {q("1/3"), q("1/3"),
                                                                  q("1/3")}) {
    BayesNet net;
    net.dag = Dag({"v1", "v2"}, {{"v1", "v2"}});
    net.alphabets = {abc(), abc()};
    net.cpts.resize(2);
    net.cpts[0].vertex = 0;
    net.cpts[0].rows = {initial};
    net.cpts[1].vertex = 1;
    net.cpts[1].parent_order = {0};
    net.cpts[1].rows = {{q("1/2"), q("1/2"), q("0")},
                        {q("0"), q("1/2"), q("1/2")},
                        {q("1/2"), q("1/2"), q("0")}};
    net.validate();
    return net;
}

inline StochasticMatrix not_d1_matrix() {
    StochasticMatrix p;
    p.states = abc();
    p.rows = {{q("1/2"), q("1/4"), q("1/4")},
              {q("1/3"), q("1/3"), q("1/3")},
              {q("0"), q("1/2"), q("1/2")}};
    p.validate();
    return p;
}

inline StochasticMatrix ks_matrix() {
    StochasticMatrix p;
    p.states = abc();
    p.rows = {{q("1/2"), q("1/4"), q("1/4")},
              {q("1/4"), q("1/2"), q("1/4")},
              {q("0"), q("1/2"), q("1/2")}};
    p.validate();
    return p;
}

// x1 -> x2 -> x3 with `p` on both edges.
inline BayesNet chain3(const StochasticMatrix& p,
                       const std::vector<Rational>& initial) {
    return unroll_dtmc(p, initial, 3);
}

inline std::vector<Rational> uniform3() { return {q("1/3"), q("1/3"), q("1/3")}; }

// f(a1) = f(a2) = b1, f(a3) = b2 at every vertex.
inline Lumping merge12(int vertices) {
    return Lumping::shared(std::vector<Alphabet>(vertices, abc()),
                           {{"a1", "b1"}, {"a2", "b1"}, {"a3", "b2"}});
}

// Random connected-enough DAG (each pair i < j is an edge with prob 1/2),
// shared alphabet of random size 2..3, positive CPT entries with
// denominator 12.
inline BayesNet random_net(std::mt19937_64& rng, int max_vertices = 4) {
    std::uniform_int_distribution<int> nv(2, max_vertices);
    std::uniform_int_distribution<int> nk(2, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    const int n = nv(rng);
    const int k = nk(rng);

    std::vector<std::string> names;
    for (int v = 1; v <= n; ++v) names.push_back("v" + std::to_string(v));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.emplace_back(names[i], names[j]);
        }
    }
    Alphabet ab;
    for (int a = 1; a <= k; ++a) ab.symbols.push_back("a" + std::to_string(a));

    BayesNet net;
    net.dag = Dag(names, edges);
    net.alphabets.assign(n, ab);
    std::uniform_int_distribution<int> pick(0, k - 1);
    auto random_row = [&]() {
        std::vector<int> parts(k, 1);
        for (int u = 0; u < 12 - k; ++u) ++parts[pick(rng)];
        std::vector<Rational> row(k);
        for (int i = 0; i < k; ++i) row[i] = make_rational(parts[i], 12);
        return row;
    };
    for (int v = 0; v < n; ++v) {
        Cpt cpt;
        cpt.vertex = v;
        cpt.parent_order = net.dag.parents(v);
        std::size_t rows = 1;
        for (std::size_t i = 0; i < cpt.parent_order.size(); ++i) rows *= k;
        for (std::size_t r = 0; r < rows; ++r) cpt.rows.push_back(random_row());
        net.cpts.push_back(std::move(cpt));
    }
    net.validate();
    return net;
}

// Random nontrivial shared lumping of `net` (which has a shared alphabet).
inline Lumping random_lumping(std::mt19937_64& rng, const BayesNet& net) {
    const int k = net.alphabets[0].size();
    std::vector<int> rgs(k, 0);
    do {
        int max = 0;
        rgs[0] = 0;
        for (int i = 1; i < k; ++i) {
            std::uniform_int_distribution<int> pick(0, max + 1);
            rgs[i] = pick(rng);
            if (rgs[i] > max) max = rgs[i];
        }
    } while (*std::max_element(rgs.begin(), rgs.end()) == k - 1);  // exclude identity
    Lumping l;
    l.map.assign(net.alphabets.size(), rgs);
    Alphabet target;
    const int classes = 1 + *std::max_element(rgs.begin(), rgs.end());
    for (int c = 1; c <= classes; ++c) target.symbols.push_back("b" + std::to_string(c));
    l.targets.assign(net.alphabets.size(), target);
    l.validate_against(net.alphabets);
    return l;
}

// Random interior initial distribution with denominator `d` per source.
inline std::map<int, std::vector<Rational>> random_interior_initial(
    std::mt19937_64& rng, const BayesNet& net, int d = 24) {
    std::map<int, std::vector<Rational>> out;
    for (int s : net.dag.source_vertices()) {
        const int k = net.alphabets[s].size();
        std::uniform_int_distribution<int> pick(0, k - 1);
        std::vector<int> parts(k, 1);
        for (int u = 0; u < d - k; ++u) ++parts[pick(rng)];
        std::vector<Rational> dist(k);
        for (int i = 0; i < k; ++i) dist[i] = make_rational(parts[i], d);
        out[s] = dist;
    }
    return out;
}

}  // namespace testutil
