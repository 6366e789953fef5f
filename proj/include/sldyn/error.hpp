#pragma once

#include <stdexcept>
#include <string>

namespace sldyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An opinion, evidence vector, base rate or trust value failed validation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Operands disagree on domain size or base rate.
class DomainMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A dogmatic opinion (zero uncertainty) reached an operation that needs finite evidence.
class DogmaticOpinion : public Error {
public:
    using Error::Error;
};

/// Fixed-point bisection could not bracket a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration rejected; the message starts with the offending field path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sldyn
