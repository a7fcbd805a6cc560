#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace finforce {

/// Thrown when an operation is called outside its precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A failed validation: which clause broke and a human-readable witness.
struct Violation {
    std::string clause;
    std::string detail;
};

/// nullopt means the object passed every check.
using Verdict = std::optional<Violation>;

}  // namespace finforce
