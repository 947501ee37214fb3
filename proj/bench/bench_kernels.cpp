// OpenMP tensor sweeps against the serial path and the pairwise reference.
//
// Arguments are (d, N, k). The reference kernel is quadratic in the number of
// sparse elements, so it only runs on the small cases.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "sgdg/projection.hpp"
#include "sgdg/tensor_apply.hpp"
#include "sgdg/transport.hpp"

using namespace sgdg;

namespace {

struct Fixture {
  std::shared_ptr<const SparseLayout> layout;
  int order;
  std::vector<HierMatrix> mats;
  TensorTerm term;
  std::vector<double> in, out;

  Fixture(int d, int n, int k) : layout(SparseLayout::make(n, d)), order(k + 1) {
    const Basis1d basis(k);
    const BasisCellTable table(basis, n, 2 * k + 2);
    mats.push_back(assemble_advection(table, [](double x, Side) { return std::sin(2.0 * x) + 1.5; }, Boundary::periodic));
    mats.push_back(assemble_mass(table, [](double x, Side) { return x * x + 0.5; }));
    term.coeff = 1.0;
    for (int m = 0; m < d; ++m) term.factors.push_back(&mats[m == 0 ? 0 : 1]);
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    in.resize(TensorApplier(layout, order).size());
    for (double& v : in) v = u(gen);
    out.assign(in.size(), 0.0);
  }
};

void tensor_apply(benchmark::State& state, bool parallel) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), static_cast<int>(state.range(2)));
  TensorApplier applier(f.layout, f.order);
  applier.set_parallel(parallel);
  for (auto _ : state) {
    applier.apply(f.term, f.in, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.counters["dof"] = static_cast<double>(f.in.size());
}

void BM_TensorApplyParallel(benchmark::State& state) { tensor_apply(state, true); }
void BM_TensorApplySerial(benchmark::State& state) { tensor_apply(state, false); }

void BM_TensorApplyReference(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), static_cast<int>(state.range(2)));
  for (auto _ : state) {
    apply_term_reference(*f.layout, f.order, f.term, f.in, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.counters["dof"] = static_cast<double>(f.in.size());
}

void transport_rhs(benchmark::State& state, bool parallel) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const int k = static_cast<int>(state.range(2));
  const auto layout = SparseLayout::make(n, d);
  const auto basis = std::make_shared<const Basis1d>(k);
  const std::vector<double> a(d, 1.0);
  TransportOperator op(layout, basis, unit_box(d), constant_field(a), FluxSpec{FluxType::upwind},
                       BoundarySpec(d, Boundary::periodic));
  op.set_parallel(parallel);
  std::vector<double> in(op.size(), 1.0), out(op.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = std::sin(0.37 * static_cast<double>(i));
  for (auto _ : state) {
    op.apply(0.0, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dof"] = static_cast<double>(op.size());
}

void BM_TransportRhsParallel(benchmark::State& state) { transport_rhs(state, true); }
void BM_TransportRhsSerial(benchmark::State& state) { transport_rhs(state, false); }

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({2, 7, 2})->Args({3, 6, 2})->Args({4, 5, 1})->Args({4, 6, 3})->Unit(benchmark::kMillisecond);
}

void small_sizes(benchmark::internal::Benchmark* b) {
  b->Args({2, 4, 1})->Args({3, 3, 1})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_TensorApplyParallel)->Apply(sizes)->Apply(small_sizes);
BENCHMARK(BM_TensorApplySerial)->Apply(sizes)->Apply(small_sizes);
BENCHMARK(BM_TensorApplyReference)->Apply(small_sizes);
BENCHMARK(BM_TransportRhsParallel)->Apply(sizes);
BENCHMARK(BM_TransportRhsSerial)->Apply(sizes);

BENCHMARK_MAIN();
