#include "anyon/perturbation.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace anyon;
using testsupport::fibonacci;
using testsupport::ising;
using testsupport::make_rng;
using testsupport::random_complex;
using testsupport::su2k4;

namespace {

TunnelingSpec random_spec(const AnyonModel& model, int a, int b, std::mt19937_64& rng) {
    std::map<std::array<int, 3>, Complex> amps;
    for (const TunnelingCharge& e : tunneling_charges(model.rules, a, b)) {
        if (e.charge == model.rules.vacuum()) continue;
        for (int alpha = 1; alpha <= e.alpha_range; ++alpha)
            for (int beta = 1; beta <= e.beta_range; ++beta)
                amps[{e.charge, alpha, beta}] = random_complex(rng);
    }
    return TunnelingSpec::make(model, a, b, amps);
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
    Eigen::MatrixXcd m(n, n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        m(i, i) = Complex{dist(rng), 0.0};
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = random_complex(rng);
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("Ising T matrix and closed-form inverse") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const TMatrix t = build_t_matrix(m, sg, sg);
    REQUIRE(t.forward.rows() == 2);

    const double expect_fwd[2][2] = {{1, 1}, {1, -1}};
    const double expect_inv[2][2] = {{0.5, 0.5}, {0.5, -0.5}};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            CHECK(std::abs(t.forward(r, c) - Complex{expect_fwd[r][c], 0}) < 1e-12);
            CHECK(std::abs(t.inverse(r, c) - Complex{expect_inv[r][c], 0}) < 1e-12);
        }
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    CHECK((t.forward * t.inverse - id).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("su2k(4) spin-1 T matrix matches the three-channel fixture") {
    const auto& m = su2k4();
    const int one = m.rules.index_of("1");
    const TMatrix t = build_t_matrix(m, one, one);
    REQUIRE(t.forward.rows() == 3);
    const double expect[3][3] = {{1, 1, 1}, {1, 0, -1}, {1, -1, 1}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            CHECK(std::abs(t.forward(r, c) - Complex{expect[r][c], 0}) < 1e-12);
}

TEST_CASE("T Tinv = Tinv T = 1 for every charge pair of every built-in") {
    for (const AnyonModel* m : {&ising(), &fibonacci(), &su2k4()}) {
        for (int a = 0; a < m->rules.charge_count(); ++a)
            for (int b = 0; b < m->rules.charge_count(); ++b) {
                const TMatrix t = build_t_matrix(*m, a, b);
                const Eigen::Index n = t.forward.rows();
                const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
                CHECK((t.forward * t.inverse - id).cwiseAbs().maxCoeff() < 1e-10);
                CHECK((t.inverse * t.forward - id).cwiseAbs().maxCoeff() < 1e-10);
            }
    }
}

TEST_CASE("build_t_matrix refuses unverified F tables") {
    const auto& m = ising();
    FSymbolTable partial(m.rules);  // almost everything missing
    const int sg = m.rules.index_of("sigma");
    partial.set(sg, sg, sg, sg, m.rules.vacuum(), 1, 1, m.rules.vacuum(), 1, 1, {1.0, 0.0});
    AnyonModel unverified{"broken", m.rules, m.dims, partial};
    CHECK_THROWS_WITH_AS(build_t_matrix(unverified, sg, sg), doctest::Contains("unitarity"),
                         validation_error);
}

TEST_CASE("worked splitting spectra") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const int ps = m.rules.index_of("psi");

    SUBCASE("Ising, Gamma_psi = 0.1") {
        const auto spec = TunnelingSpec::symmetric(m, sg, sg, {{ps, {0.1, 0.0}}});
        const SplittingResult r = splitting_spectrum(m, spec);
        REQUIRE(r.channels.size() == 2);
        CHECK(r.channels[0].channel == m.rules.vacuum());
        CHECK(r.channels[0].eigenvalues[0] == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(r.channels[1].eigenvalues[0] == doctest::Approx(-0.2).epsilon(1e-14));
    }

    SUBCASE("Fibonacci, Gamma_eps = 0.1") {
        const auto& fib = fibonacci();
        const int ep = fib.rules.index_of("eps");
        const auto spec = TunnelingSpec::symmetric(fib, ep, ep, {{ep, {0.1, 0.0}}});
        const SplittingResult r = splitting_spectrum(fib, spec);
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        REQUIRE(r.channels.size() == 2);
        CHECK(r.channels[0].eigenvalues[0] == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(r.channels[1].eigenvalues[0] == doctest::Approx(-0.2 / phi).epsilon(1e-12));
        // The splitting is asymmetric.
        CHECK(std::abs(std::abs(r.channels[0].eigenvalues[0]) -
                       std::abs(r.channels[1].eigenvalues[0])) > 1e-3);
    }

    SUBCASE("su2k(4) pair (1,1), Gamma_2 = 0.05 leaves channels 0 and 2 degenerate") {
        const auto& s4 = su2k4();
        const int one = s4.rules.index_of("1");
        const int two = s4.rules.index_of("2");
        const auto spec = TunnelingSpec::symmetric(s4, one, one, {{two, {0.05, 0.0}}});
        const SplittingResult r = splitting_spectrum(s4, spec);
        REQUIRE(r.channels.size() == 3);
        CHECK(r.channels[0].eigenvalues[0] == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(r.channels[1].eigenvalues[0] == doctest::Approx(-0.1).epsilon(1e-12));
        CHECK(r.channels[2].eigenvalues[0] == doctest::Approx(0.1).epsilon(1e-12));
        REQUIRE(r.gap_structure.size() == 2);
        CHECK(r.gap_structure[1].second == 2);
    }

    SUBCASE("all amplitudes zero") {
        const auto spec = TunnelingSpec::make(m, sg, sg, {});
        const SplittingResult r = splitting_spectrum(m, spec);
        for (const auto& ch : r.channels)
            for (double e : ch.eigenvalues) CHECK(e == 0.0);
    }
}

TEST_CASE("assembled channel matrices are Hermitian with the right eigenvalue count") {
    auto rng = make_rng(1);
    for (const AnyonModel* m : {&ising(), &fibonacci(), &su2k4()}) {
        for (int a = 0; a < m->rules.charge_count(); ++a)
            for (int b = 0; b < m->rules.charge_count(); ++b) {
                const TMatrix t = build_t_matrix(*m, a, b);
                for (int draw = 0; draw < 40; ++draw) {
                    const TunnelingSpec spec = random_spec(*m, a, b, rng);
                    const SplittingResult r = splitting_spectrum(t, spec);
                    for (const auto& ch : r.channels) {
                        CHECK((ch.matrix - ch.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
                        CHECK(static_cast<int>(ch.eigenvalues.size()) ==
                              m->rules.n(a, b, ch.channel));
                    }
                }
            }
    }
}

TEST_CASE("trace identity: sum_c d_c tr V_c vanishes when the vacuum amplitude does") {
    auto rng = make_rng(2);
    for (const AnyonModel* m : {&ising(), &fibonacci(), &su2k4()}) {
        for (int a = 0; a < m->rules.charge_count(); ++a)
            for (int b = 0; b < m->rules.charge_count(); ++b) {
                const TMatrix t = build_t_matrix(*m, a, b);
                // The identity is the vacuum column of T Tinv = 1.
                const Eigen::Index n = t.forward.rows();
                CHECK((t.forward * t.inverse - Eigen::MatrixXcd::Identity(n, n))
                          .cwiseAbs()
                          .maxCoeff() < 1e-10);
                for (int draw = 0; draw < 20; ++draw) {
                    const SplittingResult r = splitting_spectrum(t, random_spec(*m, a, b, rng));
                    Complex weighted{0.0, 0.0};
                    for (const auto& ch : r.channels)
                        weighted += m->dims[ch.channel] * ch.matrix.trace();
                    CHECK(std::abs(weighted) < 1e-10);
                }
            }
    }
}

TEST_CASE("generic amplitudes lift the degeneracy completely") {
    auto rng = make_rng(3);
    for (const AnyonModel* m : {&ising(), &fibonacci(), &su2k4()}) {
        for (int a = 0; a < m->rules.charge_count(); ++a)
            for (int b = 0; b < m->rules.charge_count(); ++b) {
                const TMatrix t = build_t_matrix(*m, a, b);
                for (int draw = 0; draw < 100; ++draw) {
                    const SplittingResult r = splitting_spectrum(t, random_spec(*m, a, b, rng));
                    std::vector<double> levels;
                    for (const auto& ch : r.channels) levels.push_back(ch.eigenvalues[0]);
                    std::sort(levels.begin(), levels.end());
                    for (std::size_t i = 1; i < levels.size(); ++i)
                        CHECK(levels[i] - levels[i - 1] > 1e-9);
                }
            }
    }
}

TEST_CASE("tunneling spec validation") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const int ps = m.rules.index_of("psi");

    // psi is not a tunneling charge for the (psi,psi) pair.
    CHECK_THROWS_AS(TunnelingSpec::make(m, ps, ps, {{{ps, 1, 1}, Complex{0.1, 0}}}),
                    std::invalid_argument);
    // Out-of-range vertex label.
    CHECK_THROWS_AS(TunnelingSpec::make(m, sg, sg, {{{ps, 2, 1}, Complex{0.1, 0}}}),
                    std::invalid_argument);
    // Nonzero vacuum amplitude is rejected; an explicit zero is fine.
    CHECK_THROWS_AS(
        TunnelingSpec::make(m, sg, sg, {{{m.rules.vacuum(), 1, 1}, Complex{0.1, 0}}}),
        std::invalid_argument);
    const auto ok = TunnelingSpec::make(m, sg, sg, {{{m.rules.vacuum(), 1, 1}, Complex{0, 0}}});
    CHECK(ok.amplitudes.empty());

    // Symmetric constructor fills every vertex pair.
    const FusionRules rules = testsupport::multiplicity_rules();
    const QuantumDimensions dims = quantum_dimensions(rules);
    AnyonModel toy{"toy", rules, dims, FSymbolTable(rules)};
    const int x = rules.index_of("x");
    const auto sym = TunnelingSpec::symmetric(toy, x, x, {{x, {0.3, 0.1}}});
    CHECK(sym.amplitudes.size() == 4);  // alpha,beta in {1,2}^2
    for (const auto& [key, v] : sym.amplitudes) CHECK(v == Complex{0.3, 0.1});
}

TEST_CASE("monodromy spectrum on the worked examples") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");

    SUBCASE("gamma_sigma = 0.1 splits the channels by the monodromy sign") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.1, 0.0}}});
        const SplittingResult r = monodromy_spectrum(m, mono);
        REQUIRE(r.channels.size() == 2);
        CHECK(r.channels[0].eigenvalues[0] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(r.channels[1].eigenvalues[0] == doctest::Approx(-0.2).epsilon(1e-12));
    }

    SUBCASE("zero loop amplitudes give zero splitting") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.0, 0.0}}});
        const SplittingResult r = monodromy_spectrum(m, mono);
        for (const auto& ch : r.channels) CHECK(ch.eigenvalues[0] == 0.0);
    }

    SUBCASE("vacuum loop shifts every channel uniformly") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{m.rules.vacuum(), {0.3, 0.7}}});
        const SplittingResult r = monodromy_spectrum(m, mono);
        for (const auto& ch : r.channels)
            CHECK(ch.eigenvalues[0] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(r.gap_structure.size() == 1);
    }

    SUBCASE("models without monodromy data refuse") {
        AnyonModel stripped{"stripped", m.rules, m.dims, m.f};
        CHECK_THROWS_AS(MonodromySpec::make(stripped, sg, sg, {{sg, {0.1, 0.0}}}),
                        unsupported_operation);
    }
}

TEST_CASE("monodromy perturbation leaves channel interiors degenerate") {
    // Toy rules with a two-dimensional channel: explicit monodromy data.
    const FusionRules rules = testsupport::multiplicity_rules();
    const QuantumDimensions dims = quantum_dimensions(rules);
    const int x = rules.index_of("x");
    const int I = rules.vacuum();
    AnyonModel toy{"toy", rules, dims, FSymbolTable(rules)};
    const auto mono = MonodromySpec::with_monodromy(
        rules, x, x, {{x, {0.25, 0.1}}},
        {{{x, I}, {1.0, 0.0}}, {{x, x}, {-0.4, 0.2}}});
    const SplittingResult r = monodromy_spectrum(toy, mono);
    REQUIRE(r.channels.size() == 2);
    const auto& xx = r.channels[1];
    REQUIRE(xx.eigenvalues.size() == 2);
    CHECK(xx.eigenvalues[0] == doctest::Approx(xx.eigenvalues[1]).epsilon(1e-15));
    CHECK((xx.matrix - xx.matrix(0, 0) * Eigen::MatrixXcd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // Explicit monodromy validation.
    CHECK_THROWS_AS(MonodromySpec::with_monodromy(rules, x, x, {}, {{{x, x}, {1.5, 0.0}}}),
                    validation_error);
    CHECK_THROWS_AS(MonodromySpec::with_monodromy(rules, x, x, {}, {{{I, x}, {0.5, 0.0}}}),
                    validation_error);
}

TEST_CASE("effective amplitudes of the worked examples") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const int ps = m.rules.index_of("psi");

    SUBCASE("zero interaction") {
        const auto v = GeneralInteraction::make(m, sg, sg, {});
        const EffectiveAmplitudes eff = effective_amplitudes(m, v);
        CHECK(eff.amplitudes.amplitudes.empty());
        CHECK(eff.vacuum_amplitude == Complex{0.0, 0.0});
        CHECK(eff.energy_offset() == 0.0);
    }

    SUBCASE("interaction built from the monodromy perturbation with gamma_sigma") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.1, 0.0}}});
        const EffectiveAmplitudes eff =
            effective_amplitudes(m, monodromy_interaction(m, mono));
        CHECK(std::abs(eff.amplitudes.amplitude(ps, 1, 1) - Complex{0.1, 0.0}) < 1e-12);
    }

    SUBCASE("Fibonacci round trip recovers a real amplitude exactly") {
        const auto& fib = fibonacci();
        const int ep = fib.rules.index_of("eps");
        const auto spec = TunnelingSpec::symmetric(fib, ep, ep, {{ep, {0.1, 0.0}}});
        const SplittingResult original = splitting_spectrum(fib, spec);
        std::map<int, Eigen::MatrixXcd> blocks;
        for (const auto& ch : original.channels) blocks[ch.channel] = ch.matrix;
        const EffectiveAmplitudes eff =
            effective_amplitudes(fib, GeneralInteraction::make(fib, ep, ep, blocks));
        CHECK(std::abs(eff.amplitudes.amplitude(ep, 1, 1) - Complex{0.1, 0.0}) < 1e-12);
        const SplittingResult rebuilt = reconstructed_spectrum(fib, eff);
        for (std::size_t c = 0; c < original.channels.size(); ++c)
            CHECK(rebuilt.channels[c].eigenvalues[0] ==
                  doctest::Approx(original.channels[c].eigenvalues[0]).epsilon(1e-12));
    }
}

TEST_CASE("round trip through effective amplitudes reproduces arbitrary Hermitian spectra") {
    auto rng = make_rng(4);
    for (const AnyonModel* m : {&ising(), &fibonacci(), &su2k4()}) {
        for (int a = 0; a < m->rules.charge_count(); ++a)
            for (int b = 0; b < m->rules.charge_count(); ++b) {
                for (int draw = 0; draw < 10; ++draw) {
                    std::map<int, Eigen::MatrixXcd> blocks;
                    for (int c : m->rules.product(a, b))
                        blocks[c] = random_hermitian(m->rules.n(a, b, c), rng);
                    const auto v = GeneralInteraction::make(*m, a, b, blocks);
                    const EffectiveAmplitudes eff = effective_amplitudes(*m, v);
                    const SplittingResult rebuilt = reconstructed_spectrum(*m, eff);
                    for (const auto& ch : rebuilt.channels) {
                        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
                            blocks.at(ch.channel), Eigen::EigenvaluesOnly);
                        for (std::size_t i = 0; i < ch.eigenvalues.size(); ++i)
                            CHECK(ch.eigenvalues[i] ==
                                  doctest::Approx(
                                      solver.eigenvalues()(static_cast<Eigen::Index>(i)))
                                      .epsilon(1e-10));
                    }
                }
            }
    }
}

TEST_CASE("non-Hermitian interactions are rejected with the offending entry named") {
    const auto& m = su2k4();
    const int one = m.rules.index_of("1");
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(1, 1);
    bad(0, 0) = Complex{0.0, 0.5};  // imaginary diagonal
    CHECK_THROWS_WITH_AS(
        GeneralInteraction::make(m, one, one, {{m.rules.vacuum(), bad}}),
        doctest::Contains("(0,1,1)"), validation_error);

    Eigen::MatrixXcd wrong_size = Eigen::MatrixXcd::Zero(2, 2);
    CHECK_THROWS_AS(GeneralInteraction::make(m, one, one, {{m.rules.vacuum(), wrong_size}}),
                    std::invalid_argument);
}

TEST_CASE("monodromy reduction to effective tunneling amplitudes") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const int ps = m.rules.index_of("psi");

    SUBCASE("gamma_sigma maps to Gamma_psi = gamma_sigma") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.1, 0.0}}});
        const EffectiveAmplitudes eff = monodromy_to_effective(m, mono);
        CHECK(std::abs(eff.amplitudes.amplitude(ps, 1, 1) - Complex{0.1, 0.0}) < 1e-12);
        CHECK(std::abs(eff.vacuum_amplitude) < 1e-14);
    }

    SUBCASE("zero loops map to zero") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.0, 0.0}}});
        const EffectiveAmplitudes eff = monodromy_to_effective(m, mono);
        CHECK(eff.amplitudes.amplitudes.empty());
        CHECK(eff.vacuum_amplitude == Complex{0.0, 0.0});
    }

    SUBCASE("gamma_psi alone is a pure uniform shift, reproduced through the offset") {
        const auto mono = MonodromySpec::make(m, sg, sg, {{ps, {0.07, 0.0}}});
        const SplittingResult direct = monodromy_spectrum(m, mono);
        const EffectiveAmplitudes eff = monodromy_to_effective(m, mono);
        const SplittingResult via = reconstructed_spectrum(m, eff);
        REQUIRE(direct.channels.size() == via.channels.size());
        for (std::size_t c = 0; c < direct.channels.size(); ++c)
            CHECK(via.channels[c].eigenvalues[0] ==
                  doctest::Approx(direct.channels[c].eigenvalues[0]).epsilon(1e-12));
    }

    SUBCASE("both reduction routes agree for real loop amplitudes") {
        auto rng = make_rng(5);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int draw = 0; draw < 25; ++draw) {
            std::map<int, Complex> gammas;
            for (int z = 0; z < m.rules.charge_count(); ++z) gammas[z] = {dist(rng), 0.0};
            const auto mono = MonodromySpec::make(m, sg, sg, gammas);
            const EffectiveAmplitudes direct = monodromy_to_effective(m, mono);
            const EffectiveAmplitudes via =
                effective_amplitudes(m, monodromy_interaction(m, mono));
            CHECK(std::abs(direct.vacuum_amplitude - via.vacuum_amplitude) < 1e-12);
            for (const auto& e : tunneling_charges(m.rules, sg, sg))
                CHECK(std::abs(direct.amplitudes.amplitude(e.charge, 1, 1) -
                               via.amplitudes.amplitude(e.charge, 1, 1)) < 1e-12);
        }
    }

    SUBCASE("spectrum equivalence for complex loop amplitudes") {
        auto rng = make_rng(6);
        for (int draw = 0; draw < 25; ++draw) {
            std::map<int, Complex> gammas;
            for (int z = 0; z < m.rules.charge_count(); ++z) gammas[z] = random_complex(rng);
            const auto mono = MonodromySpec::make(m, sg, sg, gammas);
            const SplittingResult direct = monodromy_spectrum(m, mono);
            const SplittingResult via =
                reconstructed_spectrum(m, monodromy_to_effective(m, mono));
            for (std::size_t c = 0; c < direct.channels.size(); ++c)
                CHECK(via.channels[c].eigenvalues[0] ==
                      doctest::Approx(direct.channels[c].eigenvalues[0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("combined tunneling plus monodromy spectrum") {
    const auto& m = ising();
    const int sg = m.rules.index_of("sigma");
    const int ps = m.rules.index_of("psi");
    const auto spec = TunnelingSpec::symmetric(m, sg, sg, {{ps, {0.1, 0.0}}});
    const auto mono = MonodromySpec::make(m, sg, sg, {{sg, {0.05, 0.0}}});
    const SplittingResult r = total_spectrum(m, spec, &mono);
    // E_I = 0.2 + 0.1, E_psi = -0.2 - 0.1.
    CHECK(r.channels[0].eigenvalues[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.channels[1].eigenvalues[0] == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("decayed amplitude helper") {
    CHECK(decayed_amplitude({0.3, -0.4}, 0.0, 2.0) == Complex{0.3, -0.4});
    CHECK(decayed_amplitude({1.0, 0.0}, 3.0, 3.0).real() ==
          doctest::Approx(0.36787944117144233).epsilon(1e-15));
    // Monotone decay in distance.
    double prev = std::abs(decayed_amplitude({1.0, 0.5}, 0.5, 1.5));
    for (double L : {1.0, 2.0, 4.0, 8.0}) {
        const double cur = std::abs(decayed_amplitude({1.0, 0.5}, L, 1.5));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(decayed_amplitude({1, 0}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(decayed_amplitude({1, 0}, 1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(decayed_amplitude({1, 0}, -1.0, 2.0), std::invalid_argument);
}
