#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpisim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (non-positive optical power, rho >= 1, out-of-range symbol index...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Zero linewidth has no finite coherence length.
class InfiniteCoherenceError : public DomainError {
public:
    InfiniteCoherenceError() : DomainError("zero linewidth: coherence length is infinite") {}
};

/// Mismatched or insufficient sequence lengths.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// LMS tap or output magnitude exceeded the divergence guard.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t symbol_index, const std::string& what)
        : Error(what + " at symbol " + std::to_string(symbol_index)), symbol_index_(symbol_index) {}

    std::size_t symbol_index() const noexcept { return symbol_index_; }

private:
    std::size_t symbol_index_;
};

}  // namespace mpisim
