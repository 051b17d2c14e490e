#include <benchmark/benchmark.h>

#include "billiard/billiard.hpp"

using namespace billiard;

namespace {

template <class S>
Polygon<S> square() {
    auto v = [](long x, long y) {
        return Point<S>{ScalarTraits<S>::from_int(x), ScalarTraits<S>::from_int(y)};
    };
    return Polygon<S>::build({v(0, 0), v(1, 0), v(1, 1), v(0, 1)});
}

template <class S>
void BM_step(benchmark::State& state) {
    auto p = square<S>();
    PhasePoint<S> s{{ScalarTraits<S>::from_fraction(1, 3), ScalarTraits<S>::from_fraction(1, 5)},
                    Dir<S>{ScalarTraits<S>::from_int(3), ScalarTraits<S>::from_int(7)},
                    {}};
    for (auto _ : state) {
        auto r = step(p, s);
        benchmark::DoNotOptimize(r.event.hit);
        s = r.next;
    }
}
BENCHMARK(BM_step<Rat>);
BENCHMARK(BM_step<double>);

template <class S>
void BM_trace(benchmark::State& state) {
    auto p = square<S>();
    PhasePoint<S> s{{ScalarTraits<S>::from_fraction(1, 3), ScalarTraits<S>::from_fraction(1, 5)},
                    Dir<S>{ScalarTraits<S>::from_int(3), ScalarTraits<S>::from_int(7)},
                    {}};
    for (auto _ : state) {
        auto o = trace(p, s, state.range(0), nullptr, false);
        benchmark::DoNotOptimize(o.links.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_trace<Rat>)->Arg(100)->Arg(1000);
BENCHMARK(BM_trace<double>)->Arg(100)->Arg(1000);

void BM_diagonals(benchmark::State& state) {
    auto p = square<Rat>();
    for (auto _ : state) {
        auto d = enumerate_generalized_diagonals(p, state.range(0));
        benchmark::DoNotOptimize(d.size());
    }
}
BENCHMARK(BM_diagonals)->Arg(4)->Arg(6)->Arg(8);

void BM_word_search(benchmark::State& state) {
    auto p = square<Rat>();
    WordSearchOptions<Rat> opt;
    opt.max_word = state.range(0);
    for (auto _ : state) {
        auto cyls = word_search(p, opt);
        benchmark::DoNotOptimize(cyls.size());
    }
}
BENCHMARK(BM_word_search)->Arg(6)->Arg(10);

void BM_windowed_word_search(benchmark::State& state) {
    auto p = square<Rat>();
    WordSearchOptions<Rat> opt;
    opt.max_word = 24;
    opt.window = std::make_pair(1.0, 0.05);
    for (auto _ : state) {
        auto cyls = word_search(p, opt);
        benchmark::DoNotOptimize(cyls.size());
    }
}
BENCHMARK(BM_windowed_word_search);

}  // namespace

BENCHMARK_MAIN();
