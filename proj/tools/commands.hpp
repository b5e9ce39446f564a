#pragma once

// Subcommands of the `qem` tool. Each returns the process exit status:
// 0 on success, 2 for bad input (diagnostic written to `err`). Results go to
// `out_path` when set, written to a temporary file and renamed into place,
// otherwise to `out`.

#include <iosfwd>
#include <optional>
#include <string>

namespace qem::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_bad_input = 2;

struct PredictOptions {
    std::string params_path;
    std::optional<std::string> out_path;
};

struct FitOptions {
    std::string data_path;
    double grid_min = -1.0;
    double grid_max = 1.0;
    int grid_points = 3;
    int levels = 5;
    bool refine = true;
    unsigned threads = 0;
    std::optional<std::string> out_path;
};

struct TraceOptions {
    std::string params_path;
    std::string word_class;
    std::string cue;
    int steps = 100;
    std::optional<std::string> out_path;
};

struct UfOptions {
    std::string params_path;
    std::optional<std::string> out_path;
};

struct DemoOrderOptions {
    std::string params_path;
    std::string word_class;
    std::string cue;
    std::string first;
    std::string second;
    std::optional<std::string> out_path;
};

int run_predict(const PredictOptions& o, std::ostream& out, std::ostream& err);
int run_fit(const FitOptions& o, std::ostream& out, std::ostream& err);
int run_trace(const TraceOptions& o, std::ostream& out, std::ostream& err);
int run_uf(const UfOptions& o, std::ostream& out, std::ostream& err);
int run_demo_order(const DemoOrderOptions& o, std::ostream& out, std::ostream& err);

}  // namespace qem::cli
