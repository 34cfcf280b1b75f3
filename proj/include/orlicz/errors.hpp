#ifndef ORLICZ_ERRORS_HPP
#define ORLICZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orlicz {

// Malformed input: empty grids, unsorted specs, schema violations. The CLI maps
// this to exit status 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (t < 0, lambda <= 0).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A hypothesis certificate an operation relies on is missing or failed.
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

struct RankDeficiencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact composition was requested for a map that does not send boxes to boxes.
struct UnsupportedMapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace orlicz

#endif
