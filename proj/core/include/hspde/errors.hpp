#pragma once

#include <stdexcept>
#include <string>

namespace hspde {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct NonFiniteError : Error {
    using Error::Error;
};

// Thrown by the time steppers when |u|_s exceeds the blow-up guard.
struct BlowupError : Error {
    BlowupError(const std::string& what, double t, double norm)
        : Error(what), time(t), norm_s(norm) {}
    double time = 0.0;
    double norm_s = 0.0;
};

struct MonotonicityError : Error {
    using Error::Error;
};

// A bicharacteristic's frequency coordinate reached the zero section.
struct DegenerateDirectionError : Error {
    using Error::Error;
};

}  // namespace hspde
