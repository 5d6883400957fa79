#pragma once

#include <stdexcept>
#include <string>

namespace ymlat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A logarithm was requested too close to the antipode set.
class CutLocusError : public Error {
public:
    using Error::Error;
};

class NonPositiveDensity : public Error {
public:
    using Error::Error;
};

class SimplyConnectedRequired : public Error {
public:
    using Error::Error;
};

class HomotopyFailure : public Error {
public:
    using Error::Error;
};

class GaugeTooRough : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SnapshotError : public Error {
public:
    using Error::Error;
};

} // namespace ymlat
