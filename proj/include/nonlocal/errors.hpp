#pragma once

#include <stdexcept>
#include <string>

namespace nonlocal {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Kernel evaluated at coincident points.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature gave up before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_value, double error_estimate)
        : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate)
    {
    }

    [[nodiscard]] double partial_value() const noexcept { return partial_value_; }
    [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_value_;
    double error_estimate_;
};

/// Stiffness entry (row, col) could not be integrated; indices are free-dof indices.
class AssemblyError : public std::runtime_error {
public:
    AssemblyError(const std::string& what, int row, int col)
        : std::runtime_error(what), row_(row), col_(col)
    {
    }

    [[nodiscard]] int row() const noexcept { return row_; }
    [[nodiscard]] int col() const noexcept { return col_; }

private:
    int row_;
    int col_;
};

/// Cholesky factorization failed; `minor_index` is the 0-based leading minor that is not positive.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int minor_index)
        : std::runtime_error(what), minor_index_(minor_index)
    {
    }

    [[nodiscard]] int minor_index() const noexcept { return minor_index_; }

private:
    int minor_index_;
};

/// Two objects that must live on the same mesh do not.
class MeshMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A quantity that is nonnegative by construction came out negative.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace nonlocal
