#pragma once

#include <stdexcept>
#include <string>

namespace cama {

// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric input outside its admissible domain (non-finite logit,
// probability outside [0,1], query value not in a compressed domain).
class DomainError : public Error {
public:
    using Error::Error;
};

// Metric is mathematically undefined for the cohort (single-class AUROC,
// AUPRC with no positives).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

// Operation precondition violated (budget exceeds cohort size, sample
// already acquired, empty input).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Sample id unknown to the structure being queried.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Malformed input file or schema violation.
class DataError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration (e.g. imputation strategy on a cohort
// without imputed scores).
class ConfigError : public Error {
public:
    using Error::Error;
};

// |M_post - M_pre| below the degeneracy threshold: the normalized gain
// ratio is undefined and the task should be excluded.
class DegenerateTaskError : public Error {
public:
    using Error::Error;
};

}  // namespace cama
