#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oplab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad dimension, out-of-range parameter, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An iterative kernel exceeded its iteration budget.
class NonConvergence : public Error {
public:
    using Error::Error;
};

class SingularInput : public Error {
public:
    using Error::Error;
};

class NotPSD : public Error {
public:
    using Error::Error;
};

class NotHyperbolic : public Error {
public:
    using Error::Error;
};

class UnboundedConjugator : public Error {
public:
    using Error::Error;
};

class WindowTooLarge : public Error {
public:
    using Error::Error;
};

class HorizonTooLarge : public Error {
public:
    using Error::Error;
};

class NotBoundedOrbit : public Error {
public:
    using Error::Error;
};

class DeltaTooLarge : public Error {
public:
    using Error::Error;
};

/// Raised when a shadow solver is asked to work on an operator outside the
/// generalized hyperbolic class.
class NotShadowing : public Error {
public:
    using Error::Error;
};

class ConstantWeights : public Error {
public:
    using Error::Error;
};

class TraceDiverged : public Error {
public:
    using Error::Error;
};

class NotHyponormal : public Error {
public:
    using Error::Error;
};

/// Two independent computational routes disagreed beyond their tolerance.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Experiment configuration rejected; carries the JSON path of the offending field.
class ConfigInvalid : public Error {
public:
    ConfigInvalid(std::string fieldPath, const std::string& message)
        : Error(fieldPath + ": " + message), path_(std::move(fieldPath)) {}

    const std::string& field_path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace oplab
