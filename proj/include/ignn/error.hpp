#pragma once

#include <stdexcept>
#include <string>

namespace ignn {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument values or configuration (sizes, probabilities, budgets).
struct parameter_error : error {
    using error::error;
};

// Input data violates a documented format or consistency requirement.
struct data_error : error {
    using error::error;
};

// Malformed text input; message carries the offending line number.
struct parse_error : data_error {
    using data_error::data_error;
};

// API misuse: shape mismatches, non-scalar backward roots, d_g = 0 pairs.
struct usage_error : error {
    using error::error;
};

// Training diverged (non-finite loss); message carries the epoch index.
struct training_error : error {
    using error::error;
};

// Metric has no defined value for the given input (single-class labels,
// all-tied rankings, no eligible pairs). Never silently mapped to zero.
struct undefined_metric_error : error {
    using error::error;
};

} // namespace ignn
