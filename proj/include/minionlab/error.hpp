#pragma once

#include <stdexcept>
#include <string>

namespace minionlab {

/// Thrown on precondition violations: signature mismatches, malformed
/// inputs, exceeded size caps.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace minionlab
