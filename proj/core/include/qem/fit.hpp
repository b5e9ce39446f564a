#pragma once

// Observed choice proportions and parameter estimation by RMSE minimisation:
// multi-resolution grid search followed by Nelder-Mead polishing.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qem/model.hpp"

namespace qem {

class ObservedDataset {
public:
    // Throws domain_error if any proportion lies outside [0,1].
    explicit ObservedDataset(const std::array<double, cell_count>& proportions,
                             std::optional<int> sample_size = std::nullopt);

    // Synthetic data: the model's own predictions.
    static ObservedDataset from_predictions(const PredictionTable& table);

    double proportion(WordClass w, Cue c, Probe p) const { return proportions_[cell_index(w, c, p)]; }
    const std::array<double, cell_count>& proportions() const noexcept { return proportions_; }
    std::optional<int> sample_size() const noexcept { return sample_size_; }

private:
    std::array<double, cell_count> proportions_;
    std::optional<int> sample_size_;
};

/// Reads the observations CSV: header `word_class,cue,probe,proportion`
/// followed by exactly 64 data rows. Blank lines and lines starting with '#'
/// are skipped; a comment of the form `# sample_size=<n>` records n.
///
/// Throws parse_error carrying the offending line number for malformed rows,
/// unknown tokens, duplicates and out-of-range values, and a line-free
/// parse_error ("missing cell ...") when rows are absent.
ObservedDataset load_observations(std::istream& in);

// Root mean squared difference over the 64 probability cells. Unpacking
// factors are not part of the objective.
double rmse(const PredictionTable& pred, const ObservedDataset& obs);

double objective(const ModelParams& p, const ObservedDataset& obs);

// Scalar fields of ModelParams that can be fitted.
enum class Parameter {
    nu,
    nu_prime,
    gamma,
    gamma_prime_hfc,
    gamma_prime_hfa,
    gamma_prime_lfc,
    gamma_prime_lfa,
    kappa,
    g,
    t1,
    t2,
};

// nu, nu', gamma, the four gamma' and kappa.
inline constexpr std::array<Parameter, 8> default_free_parameters{
    Parameter::nu,
    Parameter::nu_prime,
    Parameter::gamma,
    Parameter::gamma_prime_hfc,
    Parameter::gamma_prime_hfa,
    Parameter::gamma_prime_lfc,
    Parameter::gamma_prime_lfa,
    Parameter::kappa,
};

std::string_view to_string(Parameter p);
double get(const ModelParams& params, Parameter p);
void set(ModelParams& params, Parameter p, double value);

struct GridAxis {
    Parameter parameter;
    double lower;
    double upper;
    int points;
};

struct GridSpec {
    std::vector<GridAxis> axes;
    int refinement_levels = 5;
    double shrink_factor = 0.5;

    // One axis per default free parameter over [lower, upper].
    static GridSpec uniform(double lower, double upper, int points, int levels, double shrink = 0.5);

    // Throws configuration_error.
    void validate() const;
};

struct LevelBest {
    int level;
    double rmse;
};

struct FitResult {
    ModelParams params;
    double rmse = 0.0;
    std::size_t evaluations = 0;
    std::vector<LevelBest> trajectory;
};

struct SearchOptions {
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Exhaustive Cartesian grid search with re-centring.
///
/// Level 0 spans each axis' [lower, upper]. Each following level is centred
/// on the incumbent with the half-width multiplied by shrink_factor. Within
/// a level, ties go to the lexicographically smallest index vector (first
/// axis most significant), so the result does not depend on the thread
/// count. Parameters without an axis keep their value from `fixed`.
FitResult grid_search(const ObservedDataset& obs, const GridSpec& spec, const ModelParams& fixed,
                      SearchOptions options = {});

struct RefineOptions {
    std::size_t max_evaluations = 5000;
    double diameter_tolerance = 1e-6;
    double spread_tolerance = 1e-10;
    double initial_step = 0.1;
};

/// Nelder-Mead simplex descent on the listed parameters, starting at
/// `start`. The search restarts from the incumbent with a fresh simplex
/// while restarts keep improving and budget remains. The returned RMSE is
/// never worse than the start.
FitResult refine(const ObservedDataset& obs, const ModelParams& start,
                 std::span<const Parameter> free = default_free_parameters, RefineOptions options = {});

}  // namespace qem
