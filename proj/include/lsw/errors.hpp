#pragma once

#include <stdexcept>
#include <string>

namespace lsw
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// A root bracket does not contain a sign change.
class BracketError : public Error
{
public:
    using Error::Error;
};

/// An iterative method ran out of iterations before meeting its tolerance.
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

/// ODE integration produced a non-finite state or could not proceed.
class IntegrationError : public Error
{
public:
    using Error::Error;
};

/// An object is in a state in which the operation is undefined.
class StateError : public Error
{
public:
    using Error::Error;
};

/// Inconsistent input records (e.g. mismatched particle ids).
class DataError : public Error
{
public:
    using Error::Error;
};

} // namespace lsw
