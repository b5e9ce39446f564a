#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace qem::cli;

    CLI::App app{"Two-stage Hamiltonian model of three-list source memory"};
    app.require_subcommand(1);

    PredictOptions predict;
    auto* predict_cmd = app.add_subcommand("predict", "64 acceptance probabilities and 16 unpacking factors as CSV");
    predict_cmd->add_option("--params", predict.params_path, "parameters JSON")->required();
    predict_cmd->add_option("--out", predict.out_path, "output file (default: stdout)");

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit the eight drivers to an observations CSV");
    fit_cmd->add_option("--data", fit.data_path, "observations CSV")->required();
    fit_cmd->add_option("--grid-min", fit.grid_min, "lower grid bound for every driver");
    fit_cmd->add_option("--grid-max", fit.grid_max, "upper grid bound for every driver");
    fit_cmd->add_option("--grid-points", fit.grid_points, "grid points per axis")->check(CLI::Range(2, 64));
    fit_cmd->add_option("--levels", fit.levels, "grid refinement levels")->check(CLI::Range(1, 64));
    bool no_refine = false;
    fit_cmd->add_flag("--no-refine", no_refine, "skip the simplex polish");
    fit_cmd->add_option("--threads", fit.threads, "worker threads for the grid (0: all cores)");
    fit_cmd->add_option("--out", fit.out_path, "output file (default: stdout)");

    TraceOptions trace;
    auto* trace_cmd = app.add_subcommand("trace", "acceptance probabilities over both stages as CSV");
    trace_cmd->add_option("--params", trace.params_path, "parameters JSON")->required();
    trace_cmd->add_option("--class", trace.word_class, "HFC, HFA, LFC or LFA")->required();
    trace_cmd->add_option("--cue", trace.cue, "L1, L2, L3 or L4")->required();
    trace_cmd->add_option("--steps", trace.steps, "samples per stage (>= 2)")->required();
    trace_cmd->add_option("--out", trace.out_path, "output file (default: stdout)");

    UfOptions uf;
    auto* uf_cmd = app.add_subcommand("uf", "unpacking factors with verbatim and gist balance terms");
    uf_cmd->add_option("--params", uf.params_path, "parameters JSON")->required();
    uf_cmd->add_option("--out", uf.out_path, "output file (default: stdout)");

    DemoOrderOptions demo;
    auto* demo_cmd = app.add_subcommand("demo-order", "joint acceptance of two successive queries in both orders");
    demo_cmd->add_option("--params", demo.params_path, "parameters JSON")->required();
    demo_cmd->add_option("--class", demo.word_class, "HFC, HFA, LFC or LFA")->required();
    demo_cmd->add_option("--cue", demo.cue, "L1, L2, L3 or L4")->required();
    demo_cmd->add_option("--first", demo.first, "L1, L2 or L3")->required();
    demo_cmd->add_option("--second", demo.second, "L1, L2 or L3")->required();
    demo_cmd->add_option("--out", demo.out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_bad_input;
    }

    if (*predict_cmd) return run_predict(predict, std::cout, std::cerr);
    if (*fit_cmd) {
        fit.refine = !no_refine;
        return run_fit(fit, std::cout, std::cerr);
    }
    if (*trace_cmd) return run_trace(trace, std::cout, std::cerr);
    if (*uf_cmd) return run_uf(uf, std::cout, std::cerr);
    return run_demo_order(demo, std::cout, std::cerr);
}
