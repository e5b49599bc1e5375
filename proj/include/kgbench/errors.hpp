#pragma once

#include <stdexcept>
#include <string>

namespace kgbench {

// Malformed or inconsistent input data (CSV parse failures, dangling
// references, duplicate ids, infeasible generator targets, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A metric whose defining expression has no value on this input
// (division by |V| = 0, log of an empty type set, entropy of an
// empty support). Carries the name of the failing component.
class UndefinedMetric : public std::runtime_error {
public:
    UndefinedMetric(std::string component, const std::string& why)
        : std::runtime_error(component + ": " + why), component_(std::move(component)) {}
    const std::string& component() const { return component_; }

private:
    std::string component_;
};

// A workload template role that does not resolve against its schema binding.
class BindingError : public std::runtime_error {
public:
    explicit BindingError(const std::string& what) : std::runtime_error(what) {}
};

// Query spec cannot be lowered to a physical plan for the requested paradigm.
class CompileError : public std::runtime_error {
public:
    explicit CompileError(const std::string& what) : std::runtime_error(what) {}
};

// A compiled plan references names unknown to the engine it was handed to,
// or was compiled for a different paradigm.
class PlanValidationError : public std::runtime_error {
public:
    explicit PlanValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Dataset handed to an engine in a format it does not ingest.
class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// Measurement protocol violation (non-deterministic results inside a cell,
// aggregation over a sample too small for a confidence interval, ...).
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kgbench
