#pragma once

#include <stdexcept>

namespace lnrg
{

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

/// A finite-N integral does not exist on the real axis.
class DivergentIntegral : public Error
{
public:
    using Error::Error;
};

/// The RG flow left the region where R is a strictly positive function.
class FlowError : public Error
{
public:
    using Error::Error;
};

} // namespace lnrg
