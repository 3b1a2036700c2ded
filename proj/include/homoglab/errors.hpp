#ifndef HOMOGLAB_ERRORS_HPP
#define HOMOGLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace homoglab {

/// Invalid model/geometry parameters (bad ranges, misaligned grids, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A documented precondition was violated by the caller.
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

/// Problem instance exceeds a solver's stated size limit.
struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Solver invoked with the wrong number of phases.
struct WrongArityError : std::logic_error {
    explicit WrongArityError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace homoglab

#endif
