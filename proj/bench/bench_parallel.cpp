#include <benchmark/benchmark.h>

#include "spikelab/diophantine.hpp"
#include "spikelab/dynamics.hpp"
#include "spikelab/fractal.hpp"

using namespace spikelab;

namespace {

BadTestConfig scan_config() {
  BadTestConfig cfg;
  cfg.v = {0.6180339887498949};
  cfg.eps = 0.05;
  cfg.K = 2000;
  return cfg;
}

Lattice<Rational> golden_lattice() {
  BigInt a, b;
  mpz_fib_ui(a.get_mpz_t(), 80);
  mpz_fib_ui(b.get_mpz_t(), 81);
  return Lattice<Rational>(Matrix<Rational>::from_rows({{Rational(1), Rational(a, b)}, {Rational(0), Rational(1)}}));
}

void BM_scan_serial(benchmark::State& st) {
  auto cfg = scan_config();
  for (auto _ : st) benchmark::DoNotOptimize(bad_set_scan_serial(cfg, 12).survivors);
}
void BM_scan_parallel(benchmark::State& st) {
  auto cfg = scan_config();
  for (auto _ : st) benchmark::DoNotOptimize(bad_set_scan(cfg, 12).survivors);
}

void BM_orbit_serial(benchmark::State& st) {
  auto x = golden_lattice();
  for (auto _ : st) benchmark::DoNotOptimize(orbit_lambda1_serial(FlowSpec::planar(1.0), x, 2000).size());
}
void BM_orbit_parallel(benchmark::State& st) {
  auto x = golden_lattice();
  for (auto _ : st) benchmark::DoNotOptimize(orbit_lambda1(FlowSpec::planar(1.0), x, 2000).size());
}

void BM_claim_serial(benchmark::State& st) {
  CFLattice cf = build_cf_lattice(geometric_quotients(10, 4), 2);
  auto data = excursion_data(cf, 2);
  for (auto _ : st) benchmark::DoNotOptimize(verify_sigma_claim_serial(cf, data[0], 20, 5).min_sigma);
}
void BM_claim_parallel(benchmark::State& st) {
  CFLattice cf = build_cf_lattice(geometric_quotients(10, 4), 2);
  auto data = excursion_data(cf, 2);
  for (auto _ : st) benchmark::DoNotOptimize(verify_sigma_claim(cf, data[0], 20, 5).min_sigma);
}

}  // namespace

BENCHMARK(BM_scan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_orbit_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_orbit_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_claim_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_claim_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
