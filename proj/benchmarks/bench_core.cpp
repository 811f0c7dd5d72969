#include <benchmark/benchmark.h>

#include <stdexcept>

#include "mhgf/domain_io.hpp"
#include "mhgf/filter.hpp"
#include "mhgf/oracle.hpp"

using namespace mhgf;

namespace {

const Domain& full() {
    static const Domain d = bookshelf_domain();
    return d;
}

const Domain& mini() {
    static const Domain d = bookshelf_mini_domain();
    return d;
}

// Widest lifted entry seen while filtering a generated trace.
LiftedMultiHypergraph widest_state(const Domain& d, std::uint64_t seed, std::size_t length) {
    LiftedFilter f(d);
    LiftedMultiHypergraph best = d.initial;
    std::uint64_t most = count_groundings(best);
    for (const auto& y : generate_trace(d, seed, length).tuples) {
        f.step(y);
        for (const auto& [form, e] : f.belief().entries()) {
            auto n = count_groundings(e.state);
            if (n > most) most = n, best = e.state;
        }
    }
    return best;
}

const Rule& rule(const Domain& d, const char* name) {
    const Rule* r = d.find_rule(name);
    if (!r) throw std::runtime_error(std::string("no rule ") + name);
    return *r;
}

void BM_CanonicalFormGround(benchmark::State& st) {
    auto g = full().initial.ground();
    for (auto _ : st) benchmark::DoNotOptimize(canonical_form(g));
}
BENCHMARK(BM_CanonicalFormGround);

void BM_CanonicalFormLifted(benchmark::State& st) {
    auto l = widest_state(full(), 1, 40);
    for (auto _ : st) benchmark::DoNotOptimize(canonical_form_lifted(l));
}
BENCHMARK(BM_CanonicalFormLifted);

void BM_CountGroundings(benchmark::State& st) {
    auto l = widest_state(full(), 1, 40);
    st.counters["groundings"] = static_cast<double>(count_groundings(l));
    for (auto _ : st) benchmark::DoNotOptimize(count_groundings(l));
}
BENCHMARK(BM_CountGroundings);

void BM_GroundSuccessorsTake(benchmark::State& st) {
    auto g = full().initial.ground();
    const auto& take = rule(full(), "take");
    for (auto _ : st) benchmark::DoNotOptimize(successors(take, g));
}
BENCHMARK(BM_GroundSuccessorsTake);

void BM_LiftedApply(benchmark::State& st) {
    auto l = widest_state(full(), 1, 40);
    for (auto _ : st)
        for (const auto& r : full().rules) benchmark::DoNotOptimize(lifted_apply(r, l));
}
BENCHMARK(BM_LiftedApply)->Unit(benchmark::kMillisecond);

void BM_LiftedFilterTrace(benchmark::State& st) {
    const Domain& d = st.range(0) ? full() : mini();
    auto trace = generate_trace(d, 3, static_cast<std::size_t>(st.range(1))).tuples;
    for (auto _ : st) benchmark::DoNotOptimize(filter_trace(d, trace));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_LiftedFilterTrace)->Args({0, 20})->Args({1, 20})->Args({1, 40})->Unit(benchmark::kMillisecond);

void BM_GroundFilterTrace(benchmark::State& st) {
    const Domain& d = st.range(0) ? full() : mini();
    auto trace = generate_trace(d, 3, static_cast<std::size_t>(st.range(1))).tuples;
    for (auto _ : st) benchmark::DoNotOptimize(ground_filter_trace(d, trace));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_GroundFilterTrace)->Args({0, 20})->Args({1, 10})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
