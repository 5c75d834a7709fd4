#pragma once

#include <stdexcept>
#include <string>

namespace bmscrew {

/// Geometry invariant violation. Carries the offending field name so the
/// CLI can point at the exact scenario entry.
class InvalidGeometry : public std::invalid_argument {
public:
    InvalidGeometry(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class InvalidMaterial : public std::invalid_argument {
public:
    InvalidMaterial(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class OutOfRange : public std::out_of_range {
public:
    explicit OutOfRange(const std::string& what) : std::out_of_range(what) {}
};

class SingularSystem : public std::runtime_error {
public:
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

class NoSolution : public std::runtime_error {
public:
    explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

class NonMonotoneData : public std::invalid_argument {
public:
    explicit NonMonotoneData(const std::string& what) : std::invalid_argument(what) {}
};

class NegativeTension : public std::invalid_argument {
public:
    explicit NegativeTension(const std::string& what) : std::invalid_argument(what) {}
};

class InfeasibleInterference : public std::runtime_error {
public:
    explicit InfeasibleInterference(const std::string& what) : std::runtime_error(what) {}
};

class NoEngagementAcrossFracture : public std::runtime_error {
public:
    explicit NoEngagementAcrossFracture(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bmscrew
