#pragma once

#include <stdexcept>
#include <string>

namespace cqnc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration. `line` is 0 when the problem is not
/// tied to a config document line.
struct ConfigError : Error {
    ConfigError(std::string key, const std::string& what, std::size_t line = 0)
        : Error(format(key, what, line)), key(std::move(key)), line(line) {}

    std::string key;
    std::size_t line;

private:
    static std::string format(const std::string& key, const std::string& what, std::size_t line) {
        std::string msg;
        if (line != 0) msg += "line " + std::to_string(line) + ": ";
        if (!key.empty()) msg += key + ": ";
        return msg + what;
    }
};

/// A response function has an exactly vanishing denominator.
struct DivergenceError : Error {
    DivergenceError(std::string response, double omega)
        : Error("response '" + response + "' diverges at omega = " + std::to_string(omega) + " rad/s"),
          response(std::move(response)), omega(omega) {}

    std::string response;
    double omega;
};

/// The force signal does not reach the detected quadrature (g = 0 or underflow).
struct TransductionError : Error {
    explicit TransductionError(double omega)
        : Error("no optomechanical transduction at omega = " + std::to_string(omega) + " rad/s"),
          omega(omega) {}

    double omega;
};

struct SingularSystemError : Error {
    explicit SingularSystemError(double omega)
        : Error("near-singular (i omega I - A) at omega = " + std::to_string(omega) + " rad/s"),
          omega(omega) {}

    double omega;
};

struct UnsupportedError : Error {
    using Error::Error;
};

}  // namespace cqnc
