#include "qem/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qem/error.hpp"

namespace qem {

namespace {

constexpr double probability_slack = 1e-12;
constexpr double denominator_floor = 1e-12;

// Probabilities may leave [0,1] only by rounding; anything larger is a bug.
double checked_probability(double value) {
    if (!std::isfinite(value) || value < -probability_slack || value > 1.0 + probability_slack)
        throw std::logic_error("probability out of [0,1]: " + std::to_string(value));
    return std::clamp(value, 0.0, 1.0);
}

std::size_t verbatim_slot(std::size_t list) { return list; }
constexpr std::size_t gist = index(Basis::G);
constexpr std::size_t unrelated = index(Basis::N);

// Stage-one endpoint for one cue, shared by all probes.
ComplexVector5 cue_stage(Cue cue, const Drivers& d, const ModelParams& p) {
    return qem::apply(propagator(cue_hamiltonian(cue, d), p.t1), initial_state(p.g));
}

ComplexVector5 probe_stage(Probe probe, const Drivers& d, const ModelParams& p, const ComplexVector5& after_cue) {
    return qem::apply(propagator(probe_hamiltonian(probe, d, p.kappa), p.t2), after_cue);
}

// Final states for the four probes after one cue.
std::array<ComplexVector5, 4> final_states(WordClass w, Cue cue, const ModelParams& p) {
    p.validate();
    const Drivers d = drivers_for(p, w);
    const ComplexVector5 after_cue = cue_stage(cue, d, p);
    std::array<ComplexVector5, 4> out{};
    for (Probe probe : all_probes) out[index(probe)] = probe_stage(probe, d, p, after_cue);
    return out;
}

double union_denominator(double p_union) {
    if (!(p_union > denominator_floor))
        throw degenerate_denominator_error("union acceptance probability is " + std::to_string(p_union));
    return p_union;
}

}  // namespace

std::string_view to_string(Cue c) {
    static constexpr std::array<std::string_view, 4> names{"L1", "L2", "L3", "L4"};
    return names[index(c)];
}

std::string_view to_string(Probe p) {
    static constexpr std::array<std::string_view, 4> names{"L1", "L2", "L3", "L123"};
    return names[index(p)];
}

std::string_view to_string(WordClass w) {
    static constexpr std::array<std::string_view, 4> names{"HFC", "HFA", "LFC", "LFA"};
    return names[index(w)];
}

std::optional<Cue> parse_cue(std::string_view token) {
    for (Cue c : all_cues)
        if (to_string(c) == token) return c;
    return std::nullopt;
}

std::optional<Probe> parse_probe(std::string_view token) {
    for (Probe p : all_probes)
        if (to_string(p) == token) return p;
    return std::nullopt;
}

std::optional<WordClass> parse_word_class(std::string_view token) {
    for (WordClass w : all_word_classes)
        if (to_string(w) == token) return w;
    return std::nullopt;
}

void ModelParams::validate() const {
    auto require_finite = [](double v, const char* name) {
        if (!std::isfinite(v)) throw domain_error(std::string(name) + " must be finite");
    };
    require_finite(nu, "nu");
    require_finite(nu_prime, "nu_prime");
    require_finite(gamma, "gamma");
    for (WordClass w : all_word_classes)
        require_finite(gamma_prime[w], ("gamma_prime." + std::string(to_string(w))).c_str());
    require_finite(kappa, "kappa");
    if (!(g >= -1.0 && g <= 1.0)) throw domain_error("g must lie in [-1, 1]");
    if (!(t1 > 0.0) || !std::isfinite(t1)) throw domain_error("t1 must be positive and finite");
    if (!(t2 > 0.0) || !std::isfinite(t2)) throw domain_error("t2 must be positive and finite");
}

Drivers drivers_for(const ModelParams& p, WordClass w) {
    return {p.nu, p.nu_prime, p.gamma, p.gamma_prime[w]};
}

ComplexVector5 initial_state(double g) {
    if (!(g >= -1.0 && g <= 1.0)) throw domain_error("initial_state: g must lie in [-1, 1]");
    const double verbatim = std::sqrt((1.0 - g * g) / 6.0);
    return {verbatim, verbatim, verbatim, g / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
}

SymmetricMatrix5 cue_hamiltonian(Cue cue, const Drivers& d) {
    if (cue == Cue::L4) {
        SymmetricMatrix5 h = SymmetricMatrix5::diagonal({-1.0, -1.0, -1.0, -1.0, 1.0});
        for (std::size_t v = 0; v < 3; ++v) h.set(verbatim_slot(v), unrelated, d.nu_prime);
        h.set(gist, unrelated, d.gamma_prime);
        return h;
    }

    const std::size_t target = index(cue);
    RealVector5 diag{-1.0, -1.0, -1.0, 1.0, -1.0};
    diag[target] = 1.0;
    SymmetricMatrix5 h = SymmetricMatrix5::diagonal(diag);
    for (std::size_t other = 0; other < 3; ++other) {
        if (other == target) continue;
        h.set(target, other, d.nu);
        h.set(other, gist, d.gamma);
    }
    h.set(target, unrelated, d.nu_prime);
    h.set(gist, unrelated, d.gamma_prime);
    return h;
}

SymmetricMatrix5 probe_hamiltonian(Probe probe, const Drivers& d, double kappa) {
    const Drivers attenuated = d.scaled(kappa);
    if (probe == Probe::L123Q)
        return cue_hamiltonian(Cue::L1, attenuated) + cue_hamiltonian(Cue::L2, attenuated) +
               cue_hamiltonian(Cue::L3, attenuated);
    return cue_hamiltonian(static_cast<Cue>(index(probe)), attenuated);
}

SymmetricMatrix5 projector(Probe probe) {
    RealVector5 diag{0.0, 0.0, 0.0, 1.0, 0.0};
    if (probe == Probe::L123Q)
        diag[0] = diag[1] = diag[2] = 1.0;
    else
        diag[index(probe)] = 1.0;
    return SymmetricMatrix5::diagonal(diag);
}

ComplexVector5 project(Probe probe, const ComplexVector5& v) {
    const SymmetricMatrix5 m = projector(probe);
    ComplexVector5 out{};
    for (std::size_t i = 0; i < dim; ++i) out[i] = m(i, i) * v[i];
    return out;
}

double accepted_mass(Probe probe, const ComplexVector5& v) { return norm_squared(project(probe, v)); }

ComplexVector5 final_state(WordClass w, Cue cue, Probe probe, const ModelParams& p) {
    p.validate();
    const Drivers d = drivers_for(p, w);
    return probe_stage(probe, d, p, cue_stage(cue, d, p));
}

double acceptance_probability(WordClass w, Cue cue, Probe probe, const ModelParams& p) {
    return checked_probability(accepted_mass(probe, final_state(w, cue, probe, p)));
}

double unpacking_factor(WordClass w, Cue cue, const ModelParams& p) {
    const auto states = final_states(w, cue, p);
    double singles = 0.0;
    for (Probe probe : single_list_probes) singles += checked_probability(accepted_mass(probe, states[index(probe)]));
    const double p_union = checked_probability(accepted_mass(Probe::L123Q, states[index(Probe::L123Q)]));
    return singles / union_denominator(p_union);
}

UfDecomposition uf_decomposition(WordClass w, Cue cue, const ModelParams& p) {
    const auto states = final_states(w, cue, p);
    const ComplexVector5& joint = states[index(Probe::L123Q)];
    const double p_union = union_denominator(checked_probability(accepted_mass(Probe::L123Q, joint)));

    // Verbatim terms pair probe Li with its own slot Vi.
    double verbatim = 0.0;
    double gist_sum = 0.0;
    for (Probe probe : single_list_probes) {
        const std::size_t slot = verbatim_slot(index(probe));
        verbatim += std::norm(states[index(probe)][slot]) - std::norm(joint[slot]);
        gist_sum += std::norm(states[index(probe)][gist]);
    }
    gist_sum -= std::norm(joint[gist]);
    return {verbatim / p_union, gist_sum / p_union};
}

SequentialAcceptance sequential_acceptance(WordClass w, Cue cue, Probe first, Probe second,
                                           const ModelParams& p) {
    if (!is_single_list(first) || !is_single_list(second))
        throw domain_error("sequential_acceptance: probes must be single-list queries");
    p.validate();
    const Drivers d = drivers_for(p, w);

    const ComplexVector5 after_first = probe_stage(first, d, p, cue_stage(cue, d, p));
    const double p_first = checked_probability(accepted_mass(first, after_first));
    if (!(p_first > denominator_floor))
        throw degenerate_denominator_error("sequential_acceptance: first acceptance has zero probability");

    ComplexVector5 collapsed = project(first, after_first);
    const double scale = 1.0 / std::sqrt(p_first);
    for (auto& z : collapsed) z *= scale;

    const ComplexVector5 after_second = probe_stage(second, d, p, collapsed);
    const double p_second = checked_probability(accepted_mass(second, after_second));
    return {p_first, p_second, p_first * p_second};
}

std::vector<TracePoint> trace_evolution(WordClass w, Cue cue, const ModelParams& p, int steps_per_stage) {
    if (steps_per_stage < 2) throw domain_error("trace_evolution: steps_per_stage must be at least 2");
    p.validate();
    const Drivers d = drivers_for(p, w);
    const ComplexVector5 psi0 = initial_state(p.g);
    const auto steps = static_cast<std::size_t>(steps_per_stage);

    std::vector<TracePoint> out;
    out.reserve(2 * steps);

    auto sample = [](double t, const std::array<ComplexVector5, 4>& states) {
        TracePoint point{t, {}};
        for (Probe probe : all_probes) point.p[index(probe)] = checked_probability(accepted_mass(probe, states[index(probe)]));
        return point;
    };

    // Endpoints use t1 and t2 exactly so the last sample reproduces the
    // two-stage prediction.
    const Eigensystem cue_system = eigendecompose(cue_hamiltonian(cue, d));
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = (k + 1 == steps) ? p.t1 : p.t1 * static_cast<double>(k) / static_cast<double>(steps - 1);
        const ComplexVector5 state = qem::apply(propagator(cue_system, t), psi0);
        out.push_back(sample(t, {state, state, state, state}));
    }

    const ComplexVector5 after_cue = qem::apply(propagator(cue_system, p.t1), psi0);
    std::array<Eigensystem, 4> probe_systems{};
    for (Probe probe : all_probes) probe_systems[index(probe)] = eigendecompose(probe_hamiltonian(probe, d, p.kappa));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double dt = (k == steps) ? p.t2 : p.t2 * static_cast<double>(k) / static_cast<double>(steps);
        std::array<ComplexVector5, 4> states{};
        for (Probe probe : all_probes) states[index(probe)] = qem::apply(propagator(probe_systems[index(probe)], dt), after_cue);
        out.push_back(sample(p.t1 + dt, states));
    }
    return out;
}

PredictionTable predict_table(const ModelParams& p) {
    p.validate();
    PredictionTable table;
    for (WordClass w : all_word_classes) {
        const Drivers d = drivers_for(p, w);
        std::array<UnitaryMatrix5, 4> probe_propagators{};
        for (Probe probe : all_probes)
            probe_propagators[index(probe)] = propagator(probe_hamiltonian(probe, d, p.kappa), p.t2);

        for (Cue cue : all_cues) {
            const ComplexVector5 after_cue = cue_stage(cue, d, p);
            double singles = 0.0;
            for (Probe probe : all_probes) {
                const double prob =
                    checked_probability(accepted_mass(probe, qem::apply(probe_propagators[index(probe)], after_cue)));
                table.probabilities_[cell_index(w, cue, probe)] = prob;
                if (is_single_list(probe)) singles += prob;
            }
            table.unpacking_[uf_index(w, cue)] =
                singles / union_denominator(table.probabilities_[cell_index(w, cue, Probe::L123Q)]);
        }
    }
    return table;
}

}  // namespace qem
