#include <array>
#include <charconv>
#include <istream>
#include <string>
#include <vector>

#include "qem/error.hpp"
#include "qem/fit.hpp"

namespace qem {

namespace {

constexpr std::string_view expected_header = "word_class,cue,probe,proportion";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_number(std::string_view s) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

// "# sample_size=70"
void read_sample_size(std::string_view comment, std::optional<int>& sample_size) {
    comment = trim(comment.substr(1));
    constexpr std::string_view key = "sample_size=";
    if (!comment.starts_with(key)) return;
    comment = trim(comment.substr(key.size()));
    int n = 0;
    const auto [ptr, ec] = std::from_chars(comment.data(), comment.data() + comment.size(), n);
    if (ec == std::errc{} && ptr == comment.data() + comment.size() && n > 0) sample_size = n;
}

}  // namespace

ObservedDataset::ObservedDataset(const std::array<double, cell_count>& proportions, std::optional<int> sample_size)
    : proportions_(proportions), sample_size_(sample_size) {
    for (double v : proportions_)
        if (!(v >= 0.0 && v <= 1.0)) throw domain_error("observed proportion out of range [0,1]");
    if (sample_size_ && *sample_size_ <= 0) throw domain_error("sample size must be positive");
}

ObservedDataset ObservedDataset::from_predictions(const PredictionTable& table) {
    return ObservedDataset(table.probabilities());
}

ObservedDataset load_observations(std::istream& in) {
    std::array<double, cell_count> values{};
    std::array<bool, cell_count> seen{};
    std::optional<int> sample_size;
    bool header_seen = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            read_sample_size(line, sample_size);
            continue;
        }
        if (!header_seen) {
            if (line != expected_header)
                throw parse_error(line_no, "expected header '" + std::string(expected_header) + "'");
            header_seen = true;
            continue;
        }

        const auto fields = split_fields(line);
        if (fields.size() != 4)
            throw parse_error(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        const auto word_class = parse_word_class(fields[0]);
        if (!word_class) throw parse_error(line_no, "unknown word_class '" + std::string(fields[0]) + "'");
        const auto cue = parse_cue(fields[1]);
        if (!cue) throw parse_error(line_no, "unknown cue '" + std::string(fields[1]) + "'");
        const auto probe = parse_probe(fields[2]);
        if (!probe) throw parse_error(line_no, "unknown probe '" + std::string(fields[2]) + "'");
        const auto value = parse_number(fields[3]);
        if (!value) throw parse_error(line_no, "proportion '" + std::string(fields[3]) + "' is not a number");
        if (!(*value >= 0.0 && *value <= 1.0))
            throw parse_error(line_no, "proportion " + std::string(fields[3]) + " out of range [0,1]");

        const std::size_t cell = cell_index(*word_class, *cue, *probe);
        if (seen[cell])
            throw parse_error(line_no, "duplicate cell " + std::string(fields[0]) + "," + std::string(fields[1]) + "," +
                                           std::string(fields[2]));
        seen[cell] = true;
        values[cell] = *value;
    }

    if (!header_seen) throw parse_error(0, "missing header '" + std::string(expected_header) + "'");
    for (WordClass w : all_word_classes)
        for (Cue c : all_cues)
            for (Probe p : all_probes)
                if (!seen[cell_index(w, c, p)])
                    throw parse_error(0, "missing cell " + std::string(to_string(w)) + "," + std::string(to_string(c)) +
                                             "," + std::string(to_string(p)));
    return ObservedDataset(values, sample_size);
}

}  // namespace qem
