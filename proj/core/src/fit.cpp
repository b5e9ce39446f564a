#include "qem/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qem/error.hpp"

namespace qem {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

// Objective that maps unusable parameter sets (g outside [-1,1], a
// vanishing union probability, ...) to +inf instead of throwing.
double safe_objective(const ModelParams& p, const ObservedDataset& obs) {
    try {
        return objective(p, obs);
    } catch (const error&) {
        return infinity;
    }
}

struct Candidate {
    double rmse = infinity;
    std::size_t flat = std::numeric_limits<std::size_t>::max();

    bool better_than(const Candidate& other) const {
        return rmse < other.rmse || (rmse == other.rmse && flat < other.flat);
    }
};

struct LevelAxis {
    Parameter parameter;
    double lower;
    double upper;
    int points;

    double value(std::size_t k) const {
        if (k == 0) return lower;
        if (k + 1 == static_cast<std::size_t>(points)) return upper;
        return lower + (upper - lower) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
};

// Decodes a flat index with the first axis most significant, so flat order
// equals lexicographic order of index vectors.
ModelParams grid_point(const std::vector<LevelAxis>& axes, std::size_t flat, ModelParams base) {
    for (std::size_t a = axes.size(); a-- > 0;) {
        const auto n = static_cast<std::size_t>(axes[a].points);
        set(base, axes[a].parameter, axes[a].value(flat % n));
        flat /= n;
    }
    return base;
}

Candidate search_range(const ObservedDataset& obs, const std::vector<LevelAxis>& axes, const ModelParams& base,
                       std::size_t begin, std::size_t end) {
    Candidate best;
    for (std::size_t flat = begin; flat < end; ++flat) {
        const Candidate c{safe_objective(grid_point(axes, flat, base), obs), flat};
        if (c.better_than(best)) best = c;
    }
    return best;
}

Candidate search_level(const ObservedDataset& obs, const std::vector<LevelAxis>& axes, const ModelParams& base,
                       std::size_t total, unsigned threads) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(total, 1024))));
    if (threads == 1) return search_range(obs, axes, base, 0, total);

    std::vector<Candidate> partial(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(total, t * chunk);
        const std::size_t end = std::min(total, begin + chunk);
        workers.emplace_back([&, t, begin, end] { partial[t] = search_range(obs, axes, base, begin, end); });
    }
    for (auto& w : workers) w.join();

    Candidate best;
    for (const auto& c : partial)
        if (c.better_than(best)) best = c;
    return best;
}

}  // namespace

double rmse(const PredictionTable& pred, const ObservedDataset& obs) {
    double sum = 0.0;
    const auto& p = pred.probabilities();
    const auto& o = obs.proportions();
    for (std::size_t i = 0; i < cell_count; ++i) {
        const double d = p[i] - o[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(cell_count));
}

double objective(const ModelParams& p, const ObservedDataset& obs) { return rmse(predict_table(p), obs); }

std::string_view to_string(Parameter p) {
    switch (p) {
        case Parameter::nu: return "nu";
        case Parameter::nu_prime: return "nu_prime";
        case Parameter::gamma: return "gamma";
        case Parameter::gamma_prime_hfc: return "gamma_prime.HFC";
        case Parameter::gamma_prime_hfa: return "gamma_prime.HFA";
        case Parameter::gamma_prime_lfc: return "gamma_prime.LFC";
        case Parameter::gamma_prime_lfa: return "gamma_prime.LFA";
        case Parameter::kappa: return "kappa";
        case Parameter::g: return "g";
        case Parameter::t1: return "t1";
        case Parameter::t2: return "t2";
    }
    return "?";
}

double get(const ModelParams& params, Parameter p) {
    switch (p) {
        case Parameter::nu: return params.nu;
        case Parameter::nu_prime: return params.nu_prime;
        case Parameter::gamma: return params.gamma;
        case Parameter::gamma_prime_hfc: return params.gamma_prime[WordClass::HFC];
        case Parameter::gamma_prime_hfa: return params.gamma_prime[WordClass::HFA];
        case Parameter::gamma_prime_lfc: return params.gamma_prime[WordClass::LFC];
        case Parameter::gamma_prime_lfa: return params.gamma_prime[WordClass::LFA];
        case Parameter::kappa: return params.kappa;
        case Parameter::g: return params.g;
        case Parameter::t1: return params.t1;
        case Parameter::t2: return params.t2;
    }
    return 0.0;
}

void set(ModelParams& params, Parameter p, double value) {
    switch (p) {
        case Parameter::nu: params.nu = value; break;
        case Parameter::nu_prime: params.nu_prime = value; break;
        case Parameter::gamma: params.gamma = value; break;
        case Parameter::gamma_prime_hfc: params.gamma_prime[WordClass::HFC] = value; break;
        case Parameter::gamma_prime_hfa: params.gamma_prime[WordClass::HFA] = value; break;
        case Parameter::gamma_prime_lfc: params.gamma_prime[WordClass::LFC] = value; break;
        case Parameter::gamma_prime_lfa: params.gamma_prime[WordClass::LFA] = value; break;
        case Parameter::kappa: params.kappa = value; break;
        case Parameter::g: params.g = value; break;
        case Parameter::t1: params.t1 = value; break;
        case Parameter::t2: params.t2 = value; break;
    }
}

GridSpec GridSpec::uniform(double lower, double upper, int points, int levels, double shrink) {
    GridSpec spec;
    for (Parameter p : default_free_parameters) spec.axes.push_back({p, lower, upper, points});
    spec.refinement_levels = levels;
    spec.shrink_factor = shrink;
    return spec;
}

void GridSpec::validate() const {
    if (axes.empty()) throw configuration_error("grid search needs at least one free parameter");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& a = axes[i];
        if (!(std::isfinite(a.lower) && std::isfinite(a.upper) && a.lower < a.upper))
            throw configuration_error("grid axis " + std::string(to_string(a.parameter)) + ": need lower < upper");
        if (a.points < 2)
            throw configuration_error("grid axis " + std::string(to_string(a.parameter)) + ": need at least 2 points");
        for (std::size_t j = 0; j < i; ++j)
            if (axes[j].parameter == a.parameter)
                throw configuration_error("grid axis " + std::string(to_string(a.parameter)) + " listed twice");
    }
    if (refinement_levels < 1) throw configuration_error("refinement_levels must be at least 1");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw configuration_error("shrink_factor must lie in (0,1)");
}

FitResult grid_search(const ObservedDataset& obs, const GridSpec& spec, const ModelParams& fixed,
                      SearchOptions options) {
    spec.validate();
    const unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<LevelAxis> axes;
    std::size_t total = 1;
    for (const auto& a : spec.axes) {
        axes.push_back({a.parameter, a.lower, a.upper, a.points});
        total *= static_cast<std::size_t>(a.points);
    }

    FitResult result;
    result.params = fixed;
    result.rmse = infinity;
    for (int level = 0; level < spec.refinement_levels; ++level) {
        const Candidate best = search_level(obs, axes, fixed, total, threads);
        result.evaluations += total;
        // An even point count leaves the incumbent off the new grid; keep it
        // unless the level finds something strictly better.
        if (best.rmse < result.rmse) {
            result.params = grid_point(axes, best.flat, fixed);
            result.rmse = best.rmse;
        }
        result.trajectory.push_back({level, result.rmse});

        for (auto& a : axes) {
            const double half_width = spec.shrink_factor * (a.upper - a.lower) / 2.0;
            const double centre = get(result.params, a.parameter);
            a.lower = centre - half_width;
            a.upper = centre + half_width;
        }
    }
    return result;
}

FitResult refine(const ObservedDataset& obs, const ModelParams& start, std::span<const Parameter> free,
                 RefineOptions options) {
    const std::size_t n = free.size();
    FitResult result;
    result.params = start;
    result.rmse = safe_objective(start, obs);
    result.evaluations = 1;
    if (n == 0) return result;

    using Point = std::vector<double>;
    auto to_params = [&](const Point& x) {
        ModelParams p = start;
        for (std::size_t i = 0; i < n; ++i) set(p, free[i], x[i]);
        return p;
    };
    auto evaluate = [&](const Point& x) {
        ++result.evaluations;
        return safe_objective(to_params(x), obs);
    };
    auto budget_left = [&] { return result.evaluations < options.max_evaluations; };

    Point best_x(n);
    for (std::size_t i = 0; i < n; ++i) best_x[i] = get(start, free[i]);
    double best_f = result.rmse;

    constexpr double reflection = 1.0;
    constexpr double expansion = 2.0;
    constexpr double contraction = 0.5;
    constexpr double shrinkage = 0.5;

    int run = 0;
    while (budget_left()) {
        std::vector<Point> x(n + 1, best_x);
        std::vector<double> fx(n + 1, best_f);
        for (std::size_t i = 0; i < n && budget_left(); ++i) {
            x[i + 1][i] += options.initial_step;
            fx[i + 1] = evaluate(x[i + 1]);
        }

        std::vector<std::size_t> order(n + 1);
        Point centroid(n);
        while (budget_left()) {
            for (std::size_t i = 0; i <= n; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t second = order[n - 1];

            double diameter = 0.0;
            for (std::size_t v = 0; v <= n; ++v)
                for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(x[v][i] - x[lo][i]));
            if (diameter < options.diameter_tolerance || std::abs(fx[hi] - fx[lo]) < options.spread_tolerance) break;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t v = 0; v <= n; ++v)
                if (v != hi)
                    for (std::size_t i = 0; i < n; ++i) centroid[i] += x[v][i] / static_cast<double>(n);

            auto along = [&](const Point& from, double t) {
                Point p(n);
                for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + t * (from[i] - centroid[i]);
                return p;
            };

            const Point xr = along(x[hi], -reflection);
            const double fr = evaluate(xr);
            if (fr < fx[lo]) {
                Point xe = along(x[hi], -reflection * expansion);
                const double fe = budget_left() ? evaluate(xe) : infinity;
                if (fe < fr) {
                    x[hi] = std::move(xe);
                    fx[hi] = fe;
                } else {
                    x[hi] = xr;
                    fx[hi] = fr;
                }
                continue;
            }
            if (fr < fx[second]) {
                x[hi] = xr;
                fx[hi] = fr;
                continue;
            }
            if (!budget_left()) break;
            if (fr < fx[hi]) {
                Point xc = along(xr, contraction);
                const double fc = evaluate(xc);
                if (fc <= fr) {
                    x[hi] = std::move(xc);
                    fx[hi] = fc;
                    continue;
                }
            } else {
                Point xc = along(x[hi], contraction);
                const double fc = evaluate(xc);
                if (fc < fx[hi]) {
                    x[hi] = std::move(xc);
                    fx[hi] = fc;
                    continue;
                }
            }
            for (std::size_t v = 0; v <= n && budget_left(); ++v) {
                if (v == lo) continue;
                for (std::size_t i = 0; i < n; ++i) x[v][i] = x[lo][i] + shrinkage * (x[v][i] - x[lo][i]);
                fx[v] = evaluate(x[v]);
            }
        }

        const auto it = std::min_element(fx.begin(), fx.end());
        const double run_best = *it;
        const bool improved = run_best < best_f - options.spread_tolerance;
        if (run_best < best_f) {
            best_f = run_best;
            best_x = x[static_cast<std::size_t>(it - fx.begin())];
        }
        // A fresh simplex escapes the collapse Nelder-Mead is prone to; stop
        // once a restart no longer pays.
        if (!improved && run > 0) break;
        ++run;
    }

    result.params = to_params(best_x);
    result.rmse = best_f;
    result.trajectory.push_back({run, best_f});
    return result;
}

}  // namespace qem
