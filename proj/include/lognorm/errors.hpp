#pragma once

#include <stdexcept>
#include <string>

namespace lognorm {

/// Input that is well formed but outside what the library handles
/// (ramified cyclotomic fields, oracle on abstract data, ...).
class UnsupportedInput : public std::runtime_error {
public:
    explicit UnsupportedInput(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed field spec strings or group documents.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The kernel-rank oracle could not separate true relations from
/// precision artefacts, even after raising the precision.
class OracleAmbiguity : public std::runtime_error {
public:
    explicit OracleAmbiguity(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search (norm equations, continued fractions) ran out of room.
class SearchExhausted : public std::runtime_error {
public:
    explicit SearchExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lognorm
