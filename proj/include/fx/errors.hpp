#pragma once

#include <stdexcept>

namespace fx {

// Invalid parameters, capacity mismatches, bad effect wiring.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A processing step produced a non-finite sample.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed chain-config or audio file contents.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened / created / fully written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fx
