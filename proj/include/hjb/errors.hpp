#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjb {

/// Vector or matrix dimensions do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Elimination hit a pivot below the singularity threshold.
class SingularPivotError : public std::runtime_error {
public:
    SingularPivotError(std::size_t row, double pivot)
        : std::runtime_error("singular pivot " + std::to_string(pivot) +
                             " at row " + std::to_string(row))
        , row_(row)
        , pivot_(pivot) {}

    std::size_t row() const { return row_; }
    double pivot() const { return pivot_; }

private:
    std::size_t row_;
    double pivot_;
};

/// A matrix required to be an M-matrix failed structural validation.
class MMatrixError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid model or solver parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solve did not reach its termination criterion.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hjb
