#ifndef EXACTFA_ERRORS_HPP
#define EXACTFA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace exactfa {

// Root of all library errors. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched ring arities, malformed inputs, broken invariants.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

// Precondition violations (zero polynomial where nonzero required, etc).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A Groebner computation blew past its configured budget. The branch is
// abandoned with diagnostics; callers decide whether that is fatal.
class ResourceExceeded : public Error {
public:
    ResourceExceeded(const std::string& msg, std::size_t basis_size, int max_degree_seen)
        : Error(msg), basis_size(basis_size), max_degree_seen(max_degree_seen) {}
    std::size_t basis_size;
    int max_degree_seen;
};

// Interval refinement hit its round budget before the sign of some
// generator could be settled.
class PrecisionFailure : public Error {
public:
    PrecisionFailure(const std::string& msg, std::string generator)
        : Error(msg), generator(std::move(generator)) {}
    std::string generator;
};

class SingularCovariance : public Error {
public:
    explicit SingularCovariance(const std::string& msg) : Error(msg) {}
};

class SingularSigma : public Error {
public:
    explicit SingularSigma(const std::string& msg) : Error(msg) {}
};

// Hyperplane slicing found no point after its retry budget. Distinct from
// a proof that the variety is empty.
class EmptySample : public Error {
public:
    explicit EmptySample(const std::string& msg) : Error(msg) {}
};

} // namespace exactfa

#endif
