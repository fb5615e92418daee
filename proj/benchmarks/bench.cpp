#include <benchmark/benchmark.h>

#include "lumpbn/checkers.hpp"
#include "lumpbn/markov.hpp"

namespace {

using namespace lumpbn;

StochasticMatrix ks_matrix() {
    StochasticMatrix p;
    p.states.symbols = {"a1", "a2", "a3"};
    p.rows = {{Rational(1, 2), Rational(1, 4), Rational(1, 4)},
              {Rational(1, 4), Rational(1, 2), Rational(1, 4)},
              {Rational(0), Rational(1, 2), Rational(1, 2)}};
    return p;
}

std::vector<Rational> uniform3() {
    return {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
}

Lumping merge12(int vertices) {
    Lumping l;
    l.map.assign(vertices, {0, 0, 1});
    Alphabet t;
    t.symbols = {"b1", "b2"};
    l.targets.assign(vertices, t);
    return l;
}

void bm_joint(benchmark::State& state) {
    const int horizon = static_cast<int>(state.range(0));
    const BayesNet net = unroll_dtmc(ks_matrix(), uniform3(), horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(joint(net));
    }
}
BENCHMARK(bm_joint)->Arg(4)->Arg(6)->Arg(8);

void bm_check_d1(benchmark::State& state) {
    const int horizon = static_cast<int>(state.range(0));
    const BayesNet net = unroll_dtmc(ks_matrix(), uniform3(), horizon);
    const Lumping l = merge12(horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_d1(net, l));
    }
}
BENCHMARK(bm_check_d1)->Arg(3)->Arg(4)->Arg(5);

void bm_check_d3(benchmark::State& state) {
    const int horizon = static_cast<int>(state.range(0));
    const BayesNet net = unroll_dtmc(ks_matrix(), uniform3(), horizon);
    const Lumping l = merge12(horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_d3(net, l));
    }
}
BENCHMARK(bm_check_d3)->Arg(3)->Arg(4);

void bm_check_d2(benchmark::State& state) {
    const int horizon = static_cast<int>(state.range(0));
    const BayesNet net = unroll_dtmc(ks_matrix(), uniform3(), horizon);
    const Lumping l = merge12(horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_d2_exact(net, l));
    }
}
BENCHMARK(bm_check_d2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
