#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace irv {

// Error categories map one-to-one onto CLI exit codes (see run_cli):
// parse 2, validation 3, numerical 4, tie 5.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TieError : std::runtime_error {
    std::vector<int> tied;  // candidate indices tied for the minimum
    TieError(const std::string& msg, std::vector<int> t)
        : std::runtime_error(msg), tied(std::move(t)) {}
};

}  // namespace irv
