// errors.hpp — typed failure modes shared across the library.
//
// Every error carries a kind that the CLI maps onto its exit codes:
// config = 1, numerical = 2, io = 3.

#pragma once

#include <stdexcept>
#include <string>

namespace pointersim {

enum class ErrorKind { config = 1, numerical = 2, io = 3 };

class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Invalid inputs: mismatched lengths, bad parameter ranges, malformed config.
struct ConfigError : SimError {
    explicit ConfigError(const std::string& msg) : SimError(ErrorKind::config, msg) {}
};

// Conditional-value denominator sum_j |alpha_j beta_j|^2 = 0: the selections
// are component-wise orthogonal and no strong outcome survives.
struct DegeneratePostSelectionError : SimError {
    explicit DegeneratePostSelectionError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// <psi_f|psi_i> = 0: the weak value is undefined.
struct OrthogonalSelectionError : SimError {
    explicit OrthogonalSelectionError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// Cross moments require branches that share one complex width (same config).
struct IncompatibleBranchError : SimError {
    explicit IncompatibleBranchError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// Transition-value denominator vanished at this parameter point.
struct DegenerateTransitionError : SimError {
    explicit DegenerateTransitionError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// The post-selected pointer state has zero norm (beta^2 = 0).
struct PostSelectionAnnihilationError : SimError {
    explicit PostSelectionAnnihilationError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// A propagated wavepacket approached the grid boundary; results would wrap.
struct BoundaryContaminationError : SimError {
    explicit BoundaryContaminationError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

// A refinement ladder failed to converge monotonically.
struct ConvergenceError : SimError {
    explicit ConvergenceError(const std::string& msg)
        : SimError(ErrorKind::numerical, msg) {}
};

struct IoError : SimError {
    explicit IoError(const std::string& msg) : SimError(ErrorKind::io, msg) {}
};

} // namespace pointersim
