#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qem/error.hpp"
#include "qem/model.hpp"

using namespace qem;
using namespace qem::test;

namespace {

ModelParams zero_drivers(double g = 0.5) {
    ModelParams p;
    p.g = g;
    return p;
}

// Everything ends in N: a pi rotation in the (G, N) plane under cue L4 moves
// the pure-gist initial state onto N, and kappa = 0 leaves it there.
ModelParams all_rejecting() {
    ModelParams p;
    p.g = 1.0;
    for (WordClass w : all_word_classes) p.gamma_prime[w] = 1.0;
    p.t1 = std::numbers::pi / (2.0 * std::numbers::sqrt2);
    return p;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("tokens round-trip") {
    for (Cue c : all_cues) CHECK(parse_cue(to_string(c)) == c);
    for (Probe p : all_probes) CHECK(parse_probe(to_string(p)) == p);
    for (WordClass w : all_word_classes) CHECK(parse_word_class(to_string(w)) == w);
    CHECK_FALSE(parse_cue("L5"));
    CHECK_FALSE(parse_probe("L4"));
    CHECK_FALSE(parse_word_class("hfc"));
}

TEST_CASE("initial state") {
    const ComplexVector5 half = initial_state(0.5);
    CHECK(std::abs(half[4].real() - 0.707107) < 1e-6);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(half[i].real() - 0.353553) < 1e-6);

    const ComplexVector5 none = initial_state(0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(none[i].real() - 1 / std::sqrt(6.0)) < 1e-15);
    CHECK(none[3] == complex{0.0, 0.0});

    const ComplexVector5 full = initial_state(1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(full[i] == complex{0.0, 0.0});
    CHECK(std::abs(full[3].real() - 1 / std::sqrt(2.0)) < 1e-15);

    for (double g : {-1.0, -0.3, 0.0, 0.5, 0.99, 1.0}) CHECK(std::abs(norm_squared(initial_state(g)) - 1.0) < 1e-12);
    CHECK_THROWS_AS(initial_state(1.0001), qem::domain_error);
    CHECK_THROWS_AS(initial_state(-2.0), qem::domain_error);
    CHECK_THROWS_AS(initial_state(std::nan("")), qem::domain_error);
}

TEST_CASE("parameter validation names the field") {
    ModelParams p;
    p.t1 = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("t1"), qem::domain_error);
    p = ModelParams{};
    p.gamma_prime[WordClass::LFC] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("gamma_prime.LFC"), qem::domain_error);
    p = ModelParams{};
    p.g = 1.5;
    CHECK_THROWS_WITH_AS(predict_table(p), doctest::Contains("g"), qem::domain_error);
}

TEST_CASE("cue operators without drivers are the diagonal skeletons") {
    CHECK(cue_hamiltonian(Cue::L1, {}) == SymmetricMatrix5::diagonal({1, -1, -1, 1, -1}));
    CHECK(cue_hamiltonian(Cue::L2, {}) == SymmetricMatrix5::diagonal({-1, 1, -1, 1, -1}));
    CHECK(cue_hamiltonian(Cue::L3, {}) == SymmetricMatrix5::diagonal({-1, -1, 1, 1, -1}));
    CHECK(cue_hamiltonian(Cue::L4, {}) == SymmetricMatrix5::diagonal({-1, -1, -1, -1, 1}));
}

TEST_CASE("cue operator L1 at the published HFC drivers") {
    const Drivers d{-0.6885, 0.40345, 0.30631, -0.0099825};
    const SymmetricMatrix5 h = cue_hamiltonian(Cue::L1, d);
    CHECK(h(0, 1) == -0.6885);
    CHECK(h(0, 2) == -0.6885);
    CHECK(h(0, 4) == 0.40345);
    CHECK(h(1, 3) == 0.30631);
    CHECK(h(2, 3) == 0.30631);
    CHECK(h(3, 4) == -0.0099825);
    CHECK(h(0, 3) == 0.0);
    CHECK(h(1, 2) == 0.0);
    CHECK(h(1, 4) == 0.0);
    CHECK(h(2, 4) == 0.0);
    for (std::size_t i = 0; i < 5; ++i) CHECK(h(i, i) == RealVector5{1, -1, -1, 1, -1}[i]);
}

TEST_CASE("operators match the literal matrices and are exactly symmetric") {
    std::mt19937_64 rng(7);
    for (int draw = 0; draw < 200; ++draw) {
        const ModelParams p = random_params(rng);
        for (WordClass w : all_word_classes) {
            const Drivers d = drivers_for(p, w);
            for (Cue c : all_cues) {
                const auto h = cue_hamiltonian(c, d);
                REQUIRE(h == from_rows(literal_cue_rows(c, d.nu, d.nu_prime, d.gamma, d.gamma_prime)));
                REQUIRE(h.matrix() == h.matrix().transpose());
            }
            for (Probe pr : single_list_probes) {
                REQUIRE(probe_hamiltonian(pr, d, p.kappa) ==
                        from_rows(literal_probe_rows(pr, d.nu, d.nu_prime, d.gamma, d.gamma_prime, p.kappa)));
            }
            const auto joint = probe_hamiltonian(Probe::L123Q, d, p.kappa);
            REQUIRE(joint.matrix() == joint.matrix().transpose());
            REQUIRE(joint == probe_hamiltonian(Probe::L1Q, d, p.kappa) + probe_hamiltonian(Probe::L2Q, d, p.kappa) +
                                 probe_hamiltonian(Probe::L3Q, d, p.kappa));
            REQUIRE(max_abs_diff(joint.matrix(), from_rows(literal_probe_rows(Probe::L123Q, d.nu, d.nu_prime, d.gamma,
                                                                               d.gamma_prime, p.kappa))
                                                     .matrix()) < 1e-15);
        }
    }
}

TEST_CASE("probe operators under full attenuation") {
    const Drivers d{0.3, -0.2, 0.9, 0.4};
    CHECK(probe_hamiltonian(Probe::L1Q, d, 0.0) == SymmetricMatrix5::diagonal({1, -1, -1, 1, -1}));
    CHECK(probe_hamiltonian(Probe::L123Q, d, 0.0) == SymmetricMatrix5::diagonal({-1, -1, -1, 3, -3}));
}

TEST_CASE("union probe at published drivers") {
    const ModelParams p = fitted_params();
    for (WordClass w : all_word_classes) {
        const Drivers d = drivers_for(p, w);
        const auto joint = probe_hamiltonian(Probe::L123Q, d, p.kappa);
        const auto sum = probe_hamiltonian(Probe::L1Q, d, p.kappa) + probe_hamiltonian(Probe::L2Q, d, p.kappa) +
                         probe_hamiltonian(Probe::L3Q, d, p.kappa);
        CHECK(joint == sum);
        CHECK(joint(3, 4) == doctest::Approx(3 * -0.45978 * p.gamma_prime[w]).epsilon(1e-14));
    }
}

TEST_CASE("projector algebra") {
    CHECK(projector(Probe::L1Q) == SymmetricMatrix5::diagonal({1, 0, 0, 1, 0}));
    CHECK(projector(Probe::L2Q) == SymmetricMatrix5::diagonal({0, 1, 0, 1, 0}));
    CHECK(projector(Probe::L3Q) == SymmetricMatrix5::diagonal({0, 0, 1, 1, 0}));
    CHECK(projector(Probe::L123Q) == SymmetricMatrix5::diagonal({1, 1, 1, 1, 0}));
    for (Probe a : all_probes) {
        const RealMatrix5 ma = projector(a).matrix();
        CHECK(ma * ma == ma);
        for (Probe b : all_probes) {
            const RealMatrix5 mb = projector(b).matrix();
            CHECK(ma * mb == mb * ma);
            CHECK_FALSE(ma * mb == RealMatrix5{});
        }
    }
    CHECK(projector(Probe::L1Q).matrix() * projector(Probe::L2Q).matrix() ==
          SymmetricMatrix5::diagonal({0, 0, 0, 1, 0}).matrix());
}

TEST_CASE("zero drivers only add phases") {
    const ModelParams p = zero_drivers();
    const ComplexVector5 psi0 = initial_state(0.5);
    for (WordClass w : all_word_classes)
        for (Cue c : all_cues)
            for (Probe pr : all_probes) {
                const ComplexVector5 psi = final_state(w, c, pr, p);
                for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(std::abs(psi[i]) - std::abs(psi0[i])) < 1e-14);
                const double expected = pr == Probe::L123Q ? 0.5 : 0.25;
                CHECK(std::abs(acceptance_probability(w, c, pr, p) - expected) < 1e-12);
            }
}

TEST_CASE("acceptance at the published parameters") {
    const ModelParams p = fitted_params();
    CHECK(std::abs(acceptance_probability(WordClass::HFC, Cue::L1, Probe::L1Q, p) - 0.45) < 0.01);
    CHECK(std::abs(acceptance_probability(WordClass::LFA, Cue::L4, Probe::L123Q, p) - 0.21) < 0.01);
    CHECK(std::abs(norm_squared(final_state(WordClass::HFC, Cue::L1, Probe::L1Q, p)) - 1.0) < 1e-10);
}

TEST_CASE("acceptance agrees with the literal series-propagated oracle") {
    std::mt19937_64 rng(99);
    double worst = 0;
    for (int draw = 0; draw < 200; ++draw) {
        ModelParams p = random_params(rng);
        p.g = std::uniform_real_distribution<double>(-1, 1)(rng);
        for (WordClass w : all_word_classes)
            for (Cue c : all_cues)
                for (Probe pr : all_probes)
                    worst = std::max(worst, std::abs(acceptance_probability(w, c, pr, p) - oracle_probability(w, c, pr, p)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("unpacking factor") {
    CHECK(std::abs(unpacking_factor(WordClass::HFC, Cue::L1, fitted_params()) - 2.18) < 0.02);
    for (Cue c : all_cues) {
        CHECK(std::abs(unpacking_factor(WordClass::LFC, c, zero_drivers(0.5)) - 1.5) < 1e-12);
        CHECK(std::abs(unpacking_factor(WordClass::LFC, c, zero_drivers(0.0)) - 1.0) < 1e-12);
    }
}

TEST_CASE("vanishing union probability is reported") {
    const ModelParams p = all_rejecting();
    CHECK(acceptance_probability(WordClass::HFC, Cue::L4, Probe::L123Q, p) < 1e-20);
    CHECK_THROWS_AS(unpacking_factor(WordClass::HFC, Cue::L4, p), degenerate_denominator_error);
    CHECK_THROWS_AS(uf_decomposition(WordClass::HFC, Cue::L4, p), degenerate_denominator_error);
    CHECK_THROWS_AS(predict_table(p), degenerate_denominator_error);
}

TEST_CASE("unpacking decomposition") {
    const UfDecomposition zero = uf_decomposition(WordClass::HFA, Cue::L2, zero_drivers());
    CHECK(std::abs(zero.gist_balance - 0.5) < 1e-12);
    CHECK(std::abs(zero.verbatim_balance) < 1e-12);

    const UfDecomposition fitted = uf_decomposition(WordClass::HFC, Cue::L1, fitted_params());
    CHECK(std::abs(1 + fitted.verbatim_balance + fitted.gist_balance - 2.18) < 0.02);

    std::mt19937_64 rng(3);
    for (int draw = 0; draw < 1000; ++draw) {
        const ModelParams p = random_params(rng);
        const WordClass w = all_word_classes[draw % 4];
        const Cue c = all_cues[(draw / 4) % 4];
        const UfDecomposition d = uf_decomposition(w, c, p);
        REQUIRE(std::abs(1 + d.verbatim_balance + d.gist_balance - unpacking_factor(w, c, p)) < 1e-12);
    }
}

TEST_CASE("sequential queries") {
    SUBCASE("zero drivers are order invariant") {
        const ModelParams p = zero_drivers();
        const auto ab = sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L1Q, Probe::L2Q, p);
        const auto ba = sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L2Q, Probe::L1Q, p);
        CHECK(std::abs(ab.p_joint - ba.p_joint) < 1e-12);
        CHECK(std::abs(ab.p_joint - 0.125) < 1e-12);
        CHECK(std::abs(ab.p_first - 0.25) < 1e-12);
        CHECK(std::abs(ab.p_second_given_first_yes - 0.5) < 1e-12);
    }
    SUBCASE("published parameters are order dependent") {
        const ModelParams p = fitted_params();
        const auto ab = sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L1Q, Probe::L2Q, p);
        const auto ba = sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L2Q, Probe::L1Q, p);
        MESSAGE("joint L1>L2 = " << ab.p_joint << ", L2>L1 = " << ba.p_joint);
        CHECK(std::abs(ab.p_joint - ba.p_joint) > 1e-6);
        CHECK(ab.p_first == doctest::Approx(acceptance_probability(WordClass::HFC, Cue::L1, Probe::L1Q, p)).epsilon(1e-14));
        CHECK(ab.p_joint == doctest::Approx(ab.p_first * ab.p_second_given_first_yes).epsilon(1e-15));
    }
    SUBCASE("repeated query re-evolves") {
        const auto aa = sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L1Q, Probe::L1Q, fitted_params());
        MESSAGE("p(L1 again | L1 yes) = " << aa.p_second_given_first_yes);
        CHECK(aa.p_second_given_first_yes >= 0.0);
        CHECK(aa.p_second_given_first_yes <= 1.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(sequential_acceptance(WordClass::HFC, Cue::L1, Probe::L123Q, Probe::L1Q, fitted_params()),
                        qem::domain_error);
        CHECK_THROWS_AS(sequential_acceptance(WordClass::HFC, Cue::L4, Probe::L1Q, Probe::L2Q, all_rejecting()),
                        degenerate_denominator_error);
    }
}

TEST_CASE("time trace") {
    const ModelParams p = fitted_params();
    const auto trace = trace_evolution(WordClass::HFC, Cue::L1, p, 50);
    REQUIRE(trace.size() == 100);
    CHECK(trace.front().t == 0.0);
    CHECK(std::abs(trace.front().p[0] - 0.25) < 1e-12);
    CHECK(std::abs(trace.front().p[3] - 0.5) < 1e-12);
    CHECK(trace[49].t == p.t1);
    CHECK(std::abs(trace.back().t - (p.t1 + p.t2)) < 1e-15);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].t > trace[i - 1].t);
    for (Probe pr : all_probes)
        CHECK(std::abs(trace.back().p[index(pr)] - acceptance_probability(WordClass::HFC, Cue::L1, pr, p)) < 1e-12);
    const std::array<double, 4> published{0.45, 0.36, 0.36, 0.53};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(trace.back().p[i] - published[i]) < 0.01);
    // Stage one has no probe yet: all single-list curves after an L1 cue
    // share the symmetric V2/V3 values.
    CHECK(std::abs(trace[20].p[1] - trace[20].p[2]) < 1e-12);

    CHECK_THROWS_AS(trace_evolution(WordClass::HFC, Cue::L1, p, 1), qem::domain_error);
}

TEST_CASE("prediction table at the published parameters") {
    const PredictionTable table = predict_table(fitted_params());
    for (WordClass w : all_word_classes)
        for (Cue c : all_cues) {
            for (Probe pr : all_probes)
                CHECK(std::abs(table.probability(w, c, pr) - published_predictions[index(w)][index(pr)][index(c)]) <= 0.01);
            CHECK(std::abs(table.unpacking(w, c) - published_unpacking[index(w)][index(c)]) <= 0.02);
            // Subadditivity holds throughout the fitted region.
            CHECK(table.unpacking(w, c) > 1.0);
            // Targets are accepted most on their own source list.
            if (c != Cue::L4)
                for (Probe pr : single_list_probes)
                    if (index(pr) != index(c))
                        CHECK(table.probability(w, c, static_cast<Probe>(index(c))) > table.probability(w, c, pr));
        }
}

TEST_CASE("prediction table without drivers") {
    const PredictionTable table = predict_table(zero_drivers());
    for (WordClass w : all_word_classes)
        for (Cue c : all_cues) {
            for (Probe pr : single_list_probes) CHECK(std::abs(table.probability(w, c, pr) - 0.25) < 1e-12);
            CHECK(std::abs(table.probability(w, c, Probe::L123Q) - 0.5) < 1e-12);
            CHECK(std::abs(table.unpacking(w, c) - 1.5) < 1e-12);
        }
}

TEST_CASE("swapping gamma' between classes swaps only their blocks") {
    const ModelParams p = fitted_params();
    ModelParams swapped = p;
    std::swap(swapped.gamma_prime[WordClass::HFC], swapped.gamma_prime[WordClass::LFA]);
    const PredictionTable a = predict_table(p);
    const PredictionTable b = predict_table(swapped);
    auto partner = [](WordClass w) {
        if (w == WordClass::HFC) return WordClass::LFA;
        if (w == WordClass::LFA) return WordClass::HFC;
        return w;
    };
    for (WordClass w : all_word_classes)
        for (Cue c : all_cues) {
            for (Probe pr : all_probes) CHECK(b.probability(w, c, pr) == a.probability(partner(w), c, pr));
            CHECK(b.unpacking(w, c) == a.unpacking(partner(w), c));
        }
}

TEST_CASE("randomised sweep: norms, ranges, symmetry, table consistency") {
    std::mt19937_64 rng(2024);
    for (int draw = 0; draw < 1000; ++draw) {
        const ModelParams p = random_params(rng);
        const PredictionTable table = predict_table(p);
        for (WordClass w : all_word_classes) {
            for (Cue c : all_cues) {
                double singles = 0;
                for (Probe pr : all_probes) {
                    const double v = table.probability(w, c, pr);
                    REQUIRE(v >= 0.0);
                    REQUIRE(v <= 1.0);
                    if (is_single_list(pr)) singles += v;
                }
                REQUIRE(std::abs(table.unpacking(w, c) - singles / table.probability(w, c, Probe::L123Q)) < 1e-12);
            }
            // Relabelling V1, V2, V3 maps cues and probes onto each other.
            const double own = table.probability(w, Cue::L1, Probe::L1Q);
            const double other = table.probability(w, Cue::L1, Probe::L2Q);
            const double distractor = table.probability(w, Cue::L4, Probe::L1Q);
            for (Cue c : {Cue::L1, Cue::L2, Cue::L3}) {
                for (Probe pr : single_list_probes) {
                    const double v = table.probability(w, c, pr);
                    REQUIRE(std::abs(v - (index(pr) == index(c) ? own : other)) < 1e-10);
                }
                REQUIRE(std::abs(table.probability(w, c, Probe::L123Q) - table.probability(w, Cue::L1, Probe::L123Q)) < 1e-10);
            }
            for (Probe pr : single_list_probes) REQUIRE(std::abs(table.probability(w, Cue::L4, pr) - distractor) < 1e-10);
        }
        const WordClass w = all_word_classes[draw % 4];
        const Cue c = all_cues[(draw / 4) % 4];
        const Probe pr = all_probes[(draw / 16) % 4];
        REQUIRE(std::abs(norm_squared(final_state(w, c, pr, p)) - 1.0) < 1e-10);
        REQUIRE(table.probability(w, c, pr) == acceptance_probability(w, c, pr, p));
    }
}

}
