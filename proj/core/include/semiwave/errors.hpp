#pragma once

#include <stdexcept>
#include <string>

namespace semiwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

// Raised when a transform is requested at or beyond its abscissa.
class DomainExceeded : public Error {
public:
    using Error::Error;
};

class BadBracket : public Error {
public:
    using Error::Error;
};

class NoAdmissibleM : public Error {
public:
    using Error::Error;
};

class UnboundedDerivative : public Error {
public:
    using Error::Error;
};

class NoPositiveFixedPoint : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

} // namespace semiwave
