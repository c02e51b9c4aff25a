#pragma once

#include <stdexcept>
#include <string>

namespace paracalc {

// Two functions were given on different grids.
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A dyadic block or path index was outside its valid range.
struct IndexRangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// A regression/readout could not be performed on the given data.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition failed; the message names the violated inequality.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace paracalc
