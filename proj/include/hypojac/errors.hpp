#pragma once

#include <stdexcept>
#include <string>

namespace hypojac {

/// Argument outside the domain of an operation (negative moment order,
/// empty truncation, malformed spec string).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical routine could not reach its requested tolerance.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double best_estimate, double achieved_tol)
        : std::runtime_error(what), best_estimate_(best_estimate), achieved_tol_(achieved_tol) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double achieved_tolerance() const noexcept { return achieved_tol_; }

private:
    double best_estimate_;
    double achieved_tol_;
};

/// The commutator [T*,T] lost positivity numerically, so J is undefined.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, std::size_t index, double value)
        : std::runtime_error(what), index_(index), value_(value) {}

    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    std::size_t index_;
    double value_;
};

}  // namespace hypojac
