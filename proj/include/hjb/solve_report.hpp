#pragma once

#include "hjb/banded.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace hjb {

enum class Termination {
    converged,
    /// The active set (penalty masks or policy) revisited an earlier one,
    /// which exact arithmetic rules out; the iteration is cycling on
    /// round-off and the best iterate of the cycle is returned.
    rounding_cycle,
    cap_exceeded,
};

constexpr std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::rounding_cycle: return "rounding-cycle";
        case Termination::cap_exceeded: return "cap-exceeded";
    }
    return "unknown";
}

/// Outcome of an iterative nonlinear solve.
struct SolveReport {
    Vector x;
    /// Number of linear solves performed.
    std::size_t iterations = 0;
    /// Scaled termination measure of each computed iterate x^1..x^n.
    std::vector<double> residual_trace;
    /// x^0..x^n, populated only when the solver was asked to record them.
    std::vector<Vector> iterates;
    Termination termination = Termination::cap_exceeded;

    bool converged() const { return termination != Termination::cap_exceeded; }
};

}  // namespace hjb
