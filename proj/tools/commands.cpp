#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qem/error.hpp"
#include "qem/fit.hpp"
#include "qem/model.hpp"
#include "qem/params_io.hpp"

namespace qem::cli {

namespace {

// Invalid user input; mapped to exit_bad_input.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open '" + path + "'");
    return in;
}

ModelParams read_params(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_params(in);
    } catch (const error& e) {
        throw usage_error(path + ": " + e.what());
    }
}

WordClass word_class_arg(const std::string& token) {
    if (auto w = parse_word_class(token)) return *w;
    throw usage_error("unknown word class '" + token + "' (expected HFC, HFA, LFC or LFA)");
}

Cue cue_arg(const std::string& token) {
    if (auto c = parse_cue(token)) return *c;
    throw usage_error("unknown cue '" + token + "' (expected L1, L2, L3 or L4)");
}

Probe single_probe_arg(const std::string& token) {
    auto p = parse_probe(token);
    if (!p) throw usage_error("unknown probe '" + token + "' (expected L1, L2 or L3)");
    if (!is_single_list(*p)) throw usage_error("probe '" + token + "' is not a single-list query");
    return *p;
}

// Temporary file in the target directory, renamed over the destination so
// a failed run never leaves partial output.
void write_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw usage_error("cannot write '" + tmp.string() + "'");
        f << content;
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw usage_error("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw usage_error("cannot rename to '" + path + "': " + ec.message());
    }
}

void emit(const std::optional<std::string>& out_path, const std::string& content, std::ostream& out) {
    if (out_path)
        write_atomically(*out_path, content);
    else
        out << content << std::flush;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return exit_ok;
    } catch (const usage_error& e) {
        err << "qem: " << e.what() << '\n';
    } catch (const error& e) {
        err << "qem: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        err << "qem: " << e.what() << '\n';
    }
    return exit_bad_input;
}

}  // namespace

int run_predict(const PredictOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const PredictionTable table = predict_table(read_params(o.params_path));
        std::ostringstream csv;
        csv << "word_class,cue,probe,probability\n";
        for (WordClass w : all_word_classes)
            for (Cue c : all_cues)
                for (Probe p : all_probes)
                    csv << to_string(w) << ',' << to_string(c) << ',' << to_string(p) << ','
                        << fixed6(table.probability(w, c, p)) << '\n';
        csv << "word_class,cue,UF\n";
        for (WordClass w : all_word_classes)
            for (Cue c : all_cues) csv << to_string(w) << ',' << to_string(c) << ',' << fixed6(table.unpacking(w, c)) << '\n';
        emit(o.out_path, csv.str(), out);
    });
}

int run_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto in = open_input(o.data_path);
        std::optional<ObservedDataset> obs;
        try {
            obs.emplace(load_observations(in));
        } catch (const parse_error& e) {
            throw usage_error(o.data_path + ": " + e.what());
        }

        GridSpec spec = GridSpec::uniform(o.grid_min, o.grid_max, o.grid_points, o.levels);
        FitResult result = grid_search(*obs, spec, ModelParams{}, SearchOptions{o.threads});
        err << "grid search: rmse=" << fixed6(result.rmse) << " evaluations=" << result.evaluations << '\n';
        if (o.refine) {
            FitResult polished = refine(*obs, result.params);
            polished.evaluations += result.evaluations;
            result = std::move(polished);
        }
        emit(o.out_path, fit_result_to_json(result) + "\n", out);

        char line[64];
        std::snprintf(line, sizeof line, "rmse=%.9f\n", result.rmse);
        err << line;
    });
}

int run_trace(const TraceOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WordClass w = word_class_arg(o.word_class);
        const Cue c = cue_arg(o.cue);
        if (o.steps < 2) throw usage_error("--steps must be at least 2");
        const ModelParams p = read_params(o.params_path);

        std::ostringstream csv;
        csv << "t,p_L1,p_L2,p_L3,p_L123\n";
        for (const TracePoint& pt : trace_evolution(w, c, p, o.steps)) {
            csv << fixed6(pt.t);
            for (double v : pt.p) csv << ',' << fixed6(v);
            csv << '\n';
        }
        emit(o.out_path, csv.str(), out);
    });
}

int run_uf(const UfOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ModelParams p = read_params(o.params_path);
        std::ostringstream csv;
        csv << "word_class,cue,UF,verbatim_balance,gist_balance\n";
        for (WordClass w : all_word_classes)
            for (Cue c : all_cues) {
                const UfDecomposition d = uf_decomposition(w, c, p);
                csv << to_string(w) << ',' << to_string(c) << ',' << fixed6(unpacking_factor(w, c, p)) << ','
                    << fixed6(d.verbatim_balance) << ',' << fixed6(d.gist_balance) << '\n';
            }
        emit(o.out_path, csv.str(), out);
    });
}

int run_demo_order(const DemoOrderOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WordClass w = word_class_arg(o.word_class);
        const Cue c = cue_arg(o.cue);
        const Probe a = single_probe_arg(o.first);
        const Probe b = single_probe_arg(o.second);
        if (a == b) throw usage_error("--first and --second must name different lists");
        const ModelParams p = read_params(o.params_path);

        const SequentialAcceptance ab = sequential_acceptance(w, c, a, b, p);
        const SequentialAcceptance ba = sequential_acceptance(w, c, b, a, p);

        std::ostringstream csv;
        csv << "order,p_first,p_second_given_first_yes,p_joint\n";
        auto row = [&](Probe x, Probe y, const SequentialAcceptance& s) {
            csv << to_string(x) << '>' << to_string(y) << ',' << fixed6(s.p_first) << ','
                << fixed6(s.p_second_given_first_yes) << ',' << fixed6(s.p_joint) << '\n';
        };
        row(a, b, ab);
        row(b, a, ba);
        csv << "joint_difference," << scientific(ab.p_joint - ba.p_joint) << '\n';
        emit(o.out_path, csv.str(), out);
    });
}

}  // namespace qem::cli
