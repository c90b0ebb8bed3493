#ifndef BIPHOTON_ERRORS_HPP
#define BIPHOTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace biphoton {

// Error categories map one-to-one onto CLI exit codes:
//   ParseError/ConfigError -> 2, ValidationError -> 3, NumericalError -> 4.

// Malformed input document (JSON/CSV syntax, missing or unknown fields).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input describing a configuration the model cannot accept.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A wavelength left the crystal transparency window.
class TransparencyError : public ConfigError {
public:
    explicit TransparencyError(const std::string& what) : ConfigError(what) {}
};

// A domain invariant failed (catalog records, profiles, grids).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A solver or quadrature failed to converge or hit a degenerate case.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biphoton

#endif
