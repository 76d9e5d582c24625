#include "anyon/model_io.hpp"
#include "anyon/models.hpp"
#include "anyon/perturbation.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace anyon;

namespace {

void BM_MakeSu2k(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        AnyonModel m = make_su2k(k);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_MakeSu2k)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PentagonVerification(benchmark::State& state) {
    const AnyonModel m = make_su2k(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const PentagonReport r = verify_pentagon(m.f);
        benchmark::DoNotOptimize(r.max_residual);
    }
}
BENCHMARK(BM_PentagonVerification)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_UnitarityVerification(benchmark::State& state) {
    const AnyonModel m = make_su2k(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const UnitarityReport r = verify_unitarity(m.f);
        benchmark::DoNotOptimize(r.max_deviation);
    }
}
BENCHMARK(BM_UnitarityVerification)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BuildTMatrix(benchmark::State& state) {
    const AnyonModel m = make_su2k(static_cast<int>(state.range(0)));
    const int one = m.rules.index_of("1");
    for (auto _ : state) {
        const TMatrix t = build_t_matrix(m, one, one);
        benchmark::DoNotOptimize(t.forward);
    }
}
BENCHMARK(BM_BuildTMatrix)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_SplittingSpectrum(benchmark::State& state) {
    const AnyonModel m = make_su2k(4);
    const int one = m.rules.index_of("1");
    const TMatrix t = build_t_matrix(m, one, one);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::map<std::array<int, 3>, Complex> amps;
    for (const TunnelingCharge& e : tunneling_charges(m.rules, one, one)) {
        if (e.charge == m.rules.vacuum()) continue;
        amps[{e.charge, 1, 1}] = Complex{dist(rng), dist(rng)};
    }
    const TunnelingSpec spec = TunnelingSpec::make(m, one, one, amps);
    for (auto _ : state) {
        const SplittingResult r = splitting_spectrum(t, spec);
        benchmark::DoNotOptimize(r.channels);
    }
}
BENCHMARK(BM_SplittingSpectrum)->Unit(benchmark::kMicrosecond);

void BM_EffectiveAmplitudeRoundTrip(benchmark::State& state) {
    const AnyonModel m = make_fibonacci();
    const int ep = m.rules.index_of("eps");
    const TunnelingSpec spec = TunnelingSpec::symmetric(m, ep, ep, {{ep, {0.1, 0.05}}});
    const SplittingResult base = splitting_spectrum(m, spec);
    std::map<int, Eigen::MatrixXcd> blocks;
    for (const auto& ch : base.channels) blocks[ch.channel] = ch.matrix;
    const GeneralInteraction v = GeneralInteraction::make(m, ep, ep, blocks);
    for (auto _ : state) {
        const EffectiveAmplitudes eff = effective_amplitudes(m, v);
        benchmark::DoNotOptimize(eff.vacuum_amplitude);
    }
}
BENCHMARK(BM_EffectiveAmplitudeRoundTrip)->Unit(benchmark::kMicrosecond);

void BM_SerializeParse(benchmark::State& state) {
    const AnyonModel m = make_su2k(4);
    for (auto _ : state) {
        const AnyonModel copy = parse_model(serialize_model(m));
        benchmark::DoNotOptimize(copy.name);
    }
}
BENCHMARK(BM_SerializeParse)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
