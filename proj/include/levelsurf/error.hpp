#pragma once

#include <stdexcept>
#include <string>

namespace levelsurf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The linear operator handed to a solver has a nontrivial kernel.
class SingularOperator : public Error {
public:
    using Error::Error;
};

class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

/// Raised by the Krylov solver when a breakdown (NaN, negative curvature) occurs.
class SolverBreakdown : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace levelsurf
