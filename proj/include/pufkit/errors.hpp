#pragma once

#include <stdexcept>
#include <string>

namespace pufkit {

// Invalid arguments or violated preconditions.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unknown names (condition labels, catalog entries).
struct LookupError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Filesystem trouble: missing inputs, unwritable outputs.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad on-disk data: manifests, raw files, records.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed wire artifacts (helper data); distinct from a recovery failure.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No catalog code meets the failure-rate target; carries the closest miss.
struct PlanningError : std::runtime_error {
    PlanningError(const std::string& msg, int n, int k, int t, double achievable)
        : std::runtime_error(msg), best_n(n), best_k(k), best_t(t),
          best_achievable(achievable) {}
    int best_n, best_k, best_t;
    double best_achievable;
};

}  // namespace pufkit
