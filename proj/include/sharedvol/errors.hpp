#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sharedvol {

/// Raised when a caller violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for inputs that are well-formed but statistically degenerate
/// (zero variance, constant squares, ...).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an estimator cannot produce a fit. Optimizer failures carry
/// the best parameter vector found so callers can still inspect it.
class FitFailure : public std::runtime_error {
public:
    explicit FitFailure(const std::string& what, std::vector<double> best_point = {},
                        double best_value = 0.0)
        : std::runtime_error(what), best_point_(std::move(best_point)), best_value_(best_value) {}

    const std::vector<double>& best_point() const noexcept { return best_point_; }
    double best_value() const noexcept { return best_value_; }

private:
    std::vector<double> best_point_;
    double best_value_;
};

/// Pipeline-level failure tagged with the offending series label (may be empty).
class PipelineError : public std::runtime_error {
public:
    PipelineError(const std::string& what, std::string label)
        : std::runtime_error(label.empty() ? what : label + ": " + what), label_(std::move(label)) {}

    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

}  // namespace sharedvol
