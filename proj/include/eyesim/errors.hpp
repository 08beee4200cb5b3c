#pragma once

#include <stdexcept>

namespace eyesim {

/// Thrown when a computation cannot reach its requested accuracy
/// (truncation caps, unattainable tail tolerances). Distinct from
/// std::invalid_argument so callers can map it to a separate exit code.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eyesim
