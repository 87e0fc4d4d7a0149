#pragma once

#include <stdexcept>
#include <string>

namespace etsim {

/// Requested triggering threshold J is at or below the feasibility floor.
/// Carries the smallest feasible J so callers can print an actionable message.
class FeasibilityError : public std::runtime_error {
public:
    FeasibilityError(const std::string& what, double min_feasible_J)
        : std::runtime_error(what), min_feasible_J_(min_feasible_J) {}

    double min_feasible_J() const noexcept { return min_feasible_J_; }

private:
    double min_feasible_J_;
};

/// Decoder found zero or multiple timestamp candidates in the reception
/// window. Impossible for designs with wrap >= gamma + 2*delta, so this
/// indicates an internal invariant violation.
class DecodeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Channel misuse, e.g. submitting while a packet is already in flight.
class ProtocolError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A runtime guarantee of the closed loop failed during simulation.
/// The message names the first violated invariant and the step/event index.
class InvariantViolation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace etsim
