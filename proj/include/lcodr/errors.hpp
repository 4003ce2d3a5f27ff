#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcodr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A parameter violates one of its invariants. `field()` is the dotted
/// configuration path of the offending value (e.g. "ev.charger_efficiency").
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class SchemaVersionError : public Error {
public:
    using Error::Error;
};

/// Errors raised while loading or validating time-series and table files.
class DataError : public Error {
public:
    enum class Kind {
        Io,
        MissingColumn,
        NonMonotonicTimestamps,
        IrregularSpacing,
        NonNumericValue,
        BadTimestamp,
        TooShort,
        Inconsistent,
    };

    DataError(Kind kind, const std::string& message, std::size_t row = 0)
        : Error(row > 0 ? message + " (row " + std::to_string(row) + ")" : message),
          kind_(kind), row_(row) {}

    Kind kind() const noexcept { return kind_; }
    /// 1-based line number in the source file, 0 when not row-specific.
    std::size_t row() const noexcept { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

class SizingError : public Error {
public:
    enum class Kind {
        RptTooShort,
        RptOutOfRange,
        ZeroAvailability,
        ZeroShiftablePower,
        AreaTooSmall,
        Infeasible,
        UnsupportedScheme,
    };

    SizingError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// The application's discharge duration cannot be met within a day.
/// `required()` is the unclamped plug-in time the inversion produced.
class InfeasibleError : public SizingError {
public:
    InfeasibleError(double required_hours, const std::string& message)
        : SizingError(Kind::Infeasible, message), required_(required_hours) {}

    double required() const noexcept { return required_; }

private:
    double required_;
};

class CostingError : public Error {
public:
    enum class Kind { InfeasibleInput, ZeroEnergy, NonPositiveValueFactor };

    CostingError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ValueFactorError : public Error {
public:
    enum class Kind {
        NoOverlap,
        IncompatibleIntervals,
        ZeroAvailabilityMean,
        ZeroPriceSum,
        TooFewAssets,
        LengthMismatch,
    };

    ValueFactorError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class UncertaintyError : public Error {
public:
    enum class Kind { PerturbationUnsatisfiable, NoFeasibleTechnology, InvalidConfig };

    UncertaintyError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace lcodr
