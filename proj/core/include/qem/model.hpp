#pragma once

// Two-stage Hamiltonian model of source-memory acceptance in the three-list
// paradigm. A belief state over (V1, V2, V3, G, N) is evolved first under a
// cue Hamiltonian, then under a probe Hamiltonian, and measured with the
// probe's acceptance projector.

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qem/linalg.hpp"

namespace qem {

// Layout of every state vector and operator.
enum class Basis : std::size_t { V1 = 0, V2 = 1, V3 = 2, G = 3, N = 4 };

// Source list of the presented word; L4 holds the unstudied distractors.
enum class Cue : std::size_t { L1 = 0, L2 = 1, L3 = 2, L4 = 3 };

// Membership question: "list i?" or "any of lists 1-3?".
enum class Probe : std::size_t { L1Q = 0, L2Q = 1, L3Q = 2, L123Q = 3 };

// Word frequency (high/low) x concreteness (concrete/abstract).
enum class WordClass : std::size_t { HFC = 0, HFA = 1, LFC = 2, LFA = 3 };

inline constexpr std::array<Cue, 4> all_cues{Cue::L1, Cue::L2, Cue::L3, Cue::L4};
inline constexpr std::array<Probe, 4> all_probes{Probe::L1Q, Probe::L2Q, Probe::L3Q, Probe::L123Q};
inline constexpr std::array<Probe, 3> single_list_probes{Probe::L1Q, Probe::L2Q, Probe::L3Q};
inline constexpr std::array<WordClass, 4> all_word_classes{WordClass::HFC, WordClass::HFA, WordClass::LFC,
                                                           WordClass::LFA};

constexpr std::size_t index(Basis b) { return static_cast<std::size_t>(b); }
constexpr std::size_t index(Cue c) { return static_cast<std::size_t>(c); }
constexpr std::size_t index(Probe p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index(WordClass w) { return static_cast<std::size_t>(w); }

constexpr bool is_single_list(Probe p) { return p != Probe::L123Q; }

// Tokens used in files and on the command line: "HFC", "L1", and probes
// "L1".."L3", "L123".
std::string_view to_string(Cue c);
std::string_view to_string(Probe p);
std::string_view to_string(WordClass w);
std::optional<Cue> parse_cue(std::string_view token);
std::optional<Probe> parse_probe(std::string_view token);
std::optional<WordClass> parse_word_class(std::string_view token);

// Per-word-class value, indexed by WordClass.
template <class T>
struct ByWordClass {
    std::array<T, 4> values{};

    T& operator[](WordClass w) { return values[index(w)]; }
    const T& operator[](WordClass w) const { return values[index(w)]; }

    friend bool operator==(const ByWordClass&, const ByWordClass&) = default;
};

struct ModelParams {
    double nu = 0.0;        // cue verbatim <-> other verbatim
    double nu_prime = 0.0;  // cue verbatim <-> N
    double gamma = 0.0;     // G <-> non-cue verbatim
    ByWordClass<double> gamma_prime{};  // G <-> N, per word class
    double kappa = 0.0;     // probe-stage attenuation of all four drivers
    double g = 0.5;         // gist weight of the initial state, in [-1, 1]
    double t1 = std::numbers::pi / 2;  // cue-stage duration
    double t2 = std::numbers::pi / 2;  // probe-stage duration

    // Throws domain_error naming the offending field.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Drivers of a single Hamiltonian, with gamma' already resolved for one class.
struct Drivers {
    double nu = 0.0;
    double nu_prime = 0.0;
    double gamma = 0.0;
    double gamma_prime = 0.0;

    Drivers scaled(double factor) const { return {factor * nu, factor * nu_prime, factor * gamma, factor * gamma_prime}; }
};

Drivers drivers_for(const ModelParams& p, WordClass w);

/// [sqrt((1-g^2)/6) x3, g/sqrt(2), 1/sqrt(2)]. Throws domain_error when g is
/// outside [-1, 1].
ComplexVector5 initial_state(double g);

/// Stage-one operator for a cue.
///
/// For a studied list Li: +1 on Vi and G, -1 elsewhere on the diagonal;
/// nu couples Vi to the other verbatim slots, nu' couples Vi to N, gamma
/// couples the other verbatim slots to G, gamma' couples G to N.
/// For the distractor list L4: diagonal (-1,-1,-1,-1,+1), nu' couples every
/// verbatim slot to N and gamma' couples G to N.
SymmetricMatrix5 cue_hamiltonian(Cue cue, const Drivers& d);

/// Stage-two operator for a probe: the matching studied-list cue operator
/// with all drivers scaled by kappa. The union probe is the entry-wise sum
/// of the three single-list probe operators.
SymmetricMatrix5 probe_hamiltonian(Probe probe, const Drivers& d, double kappa);

// Diagonal 0/1 acceptance projector: Vi and G for "Li?", all of V1..V3 and G
// for the union probe.
SymmetricMatrix5 projector(Probe probe);

// Squared norm of projector(probe) * v.
double accepted_mass(Probe probe, const ComplexVector5& v);

ComplexVector5 project(Probe probe, const ComplexVector5& v);

ComplexVector5 final_state(WordClass w, Cue cue, Probe probe, const ModelParams& p);

double acceptance_probability(WordClass w, Cue cue, Probe probe, const ModelParams& p);

/// Sum of the three single-list acceptance probabilities over the union
/// probability. Throws degenerate_denominator_error when the union
/// probability is at most 1e-12.
double unpacking_factor(WordClass w, Cue cue, const ModelParams& p);

struct UfDecomposition {
    double verbatim_balance;  // sum_i |psi_Li[Vi]|^2 - |psi_L123[Vi]|^2, over p(L123)
    double gist_balance;      // sum_i |psi_Li[G]|^2 - |psi_L123[G]|^2, over p(L123)
};

// 1 + verbatim_balance + gist_balance equals unpacking_factor().
UfDecomposition uf_decomposition(WordClass w, Cue cue, const ModelParams& p);

struct SequentialAcceptance {
    double p_first;
    double p_second_given_first_yes;
    double p_joint;
};

/// Two successive single-list queries. After the cue stage the state is
/// evolved under the first probe's operator, projected on acceptance and
/// renormalised, then evolved under the second probe's operator and
/// measured again.
///
/// Throws domain_error for a union probe and degenerate_denominator_error
/// when the first acceptance has probability at most 1e-12.
SequentialAcceptance sequential_acceptance(WordClass w, Cue cue, Probe first, Probe second,
                                           const ModelParams& p);

struct TracePoint {
    double t;
    std::array<double, 4> p;  // indexed by Probe
};

/// Acceptance probabilities sampled over both stages: steps_per_stage
/// samples on [0, t1] under the cue operator, then steps_per_stage samples
/// on (t1, t1 + t2] where each probe follows its own operator from the
/// shared stage-one endpoint.
std::vector<TracePoint> trace_evolution(WordClass w, Cue cue, const ModelParams& p, int steps_per_stage);

inline constexpr std::size_t cell_count = 64;
inline constexpr std::size_t uf_cell_count = 16;

constexpr std::size_t cell_index(WordClass w, Cue c, Probe p) { return index(w) * 16 + index(c) * 4 + index(p); }
constexpr std::size_t uf_index(WordClass w, Cue c) { return index(w) * 4 + index(c); }

class PredictionTable {
public:
    double probability(WordClass w, Cue c, Probe p) const { return probabilities_[cell_index(w, c, p)]; }
    double unpacking(WordClass w, Cue c) const { return unpacking_[uf_index(w, c)]; }

    const std::array<double, cell_count>& probabilities() const noexcept { return probabilities_; }

private:
    friend PredictionTable predict_table(const ModelParams& p);

    std::array<double, cell_count> probabilities_{};
    std::array<double, uf_cell_count> unpacking_{};
};

// All 64 acceptance probabilities and 16 unpacking factors.
PredictionTable predict_table(const ModelParams& p);

}  // namespace qem
