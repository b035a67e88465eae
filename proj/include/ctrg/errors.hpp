#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctrg {

// Base of every library failure. kind() names the invariant or condition.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }
    virtual bool is_validation() const { return false; }

private:
    std::string kind_;
};

// Bad user input; the CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
    bool is_validation() const override { return true; }
};

struct InvalidConfig : ValidationError {
    explicit InvalidConfig(const std::string& w) : ValidationError("InvalidConfig", w) {}
};
struct Unsupported : ValidationError {
    explicit Unsupported(const std::string& w) : ValidationError("Unsupported", w) {}
};

struct InvalidMatrix : Error {
    explicit InvalidMatrix(const std::string& w) : Error("InvalidMatrix", w) {}
};

class SingularMatrix : public Error {
public:
    SingularMatrix(std::size_t index, double value)
        : Error("SingularMatrix", "eigenvalue " + std::to_string(index) + " = " + std::to_string(value)),
          index_(index), value_(value) {}
    std::size_t index() const { return index_; }
    double value() const { return value_; }

private:
    std::size_t index_;
    double value_;
};

struct DegenerateWeight : Error {
    explicit DegenerateWeight(const std::string& w) : Error("DegenerateWeight", w) {}
};
struct StructureViolation : Error {
    explicit StructureViolation(const std::string& w) : Error("StructureViolation", w) {}
};
struct InternalInvariantViolation : Error {
    explicit InternalInvariantViolation(const std::string& w) : Error("InternalInvariantViolation", w) {}
};
struct NonNormalizableTrace : Error {
    explicit NonNormalizableTrace(const std::string& w) : Error("NonNormalizableTrace", w) {}
};
struct PhaseBookkeepingError : Error {
    explicit PhaseBookkeepingError(const std::string& w) : Error("PhaseBookkeepingError", w) {}
};
struct OddLifetimeViolation : Error {
    explicit OddLifetimeViolation(const std::string& w) : Error("OddLifetimeViolation", w) {}
};
struct InvalidSpace : Error {
    explicit InvalidSpace(const std::string& w) : Error("InvalidSpace", w) {}
};
struct NonNormalizable : Error {
    explicit NonNormalizable(const std::string& w) : Error("NonNormalizable", w) {}
};
struct ResolutionWarning : Error {
    explicit ResolutionWarning(const std::string& w) : Error("ResolutionWarning", w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error("IoError", w) {}
};

} // namespace ctrg
