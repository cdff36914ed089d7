#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace freeholo {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-conformable shapes, ragged grids, out-of-range variable indices.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A linear solve whose reciprocal condition estimate fell below the floor.
class SingularError : public Error {
public:
    SingularError(const std::string& what, double rcond)
        : Error(what), rcond_(rcond) {}
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

/// A point outside the domain {x : ||delta(x)|| < 1} (or a derived ball).
class DomainError : public Error {
public:
    DomainError(const std::string& what, double norm, double suggested_step = 0.0)
        : Error(what), norm_(norm), suggested_step_(suggested_step) {}
    double norm() const noexcept { return norm_; }
    /// Non-zero when a smaller step would bring a block tuple back inside.
    double suggested_step() const noexcept { return suggested_step_; }

private:
    double norm_;
    double suggested_step_;
};

/// A geometric series whose ratio is not below one.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double ratio)
        : Error(what), ratio_(ratio) {}
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

/// Random search exhausted its budget (sampler rejection, conjugation retries).
class SamplingError : public Error {
public:
    using Error::Error;
};

/// Symbolic expansion exceeded the configured word budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, int degree_reached)
        : Error(what), degree_reached_(degree_reached) {}
    int degree_reached() const noexcept { return degree_reached_; }

private:
    int degree_reached_;
};

/// Malformed fixture files (JSON shape, missing keys, non-finite numbers).
class FixtureError : public Error {
public:
    using Error::Error;
};

}  // namespace freeholo
