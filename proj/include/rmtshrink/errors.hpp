#ifndef RMTSHRINK_ERRORS_HPP
#define RMTSHRINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rmtshrink {

/// Base class for every failure raised by the library. The CLI maps each
/// subclass to its own exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// The underlying decomposition did not converge or produced non-finite output.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// No noise scale satisfies the estimator's feasibility constraints.
class InfeasibleSigma : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rmtshrink

#endif // RMTSHRINK_ERRORS_HPP
