#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qem {

// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite or otherwise unusable matrix input.
class invalid_matrix_error : public error {
public:
    using error::error;
};

// Parameter outside its admissible range (e.g. g outside [-1,1]).
class domain_error : public error {
public:
    using error::error;
};

// A ratio whose denominator vanished (union probability, conditioning event).
class degenerate_denominator_error : public error {
public:
    using error::error;
};

// Tables that do not cover the same cells.
class schema_error : public error {
public:
    using error::error;
};

// Fit configuration that cannot be run (empty free set, bad grid).
class configuration_error : public error {
public:
    using error::error;
};

// Malformed input file. row() is the 1-based line number, 0 when the
// problem is not tied to a single line (e.g. a missing cell).
class parse_error : public error {
public:
    parse_error(std::size_t row, const std::string& what)
        : error(row == 0 ? what : "line " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace qem
