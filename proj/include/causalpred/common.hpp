#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causalpred {

// Input, configuration, or data-contract violations. CLI maps these to exit 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Singular systems, non-convergence, undefined log-ratios. CLI maps these to exit 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Calendar date stored as days since 1970-01-01, valid across the proleptic
// Gregorian calendar. Panel data requires uniform daily spacing, so plain
// integer arithmetic on this type is the lag arithmetic.
class Date {
public:
    Date() = default;
    explicit Date(int days_since_epoch) : days_(days_since_epoch) {}

    static Date from_civil(int year, int month, int day);
    static Date parse(std::string_view iso);  // "YYYY-MM-DD"

    std::string to_string() const;
    int days() const { return days_; }

    Date operator+(int d) const { return Date(days_ + d); }
    int operator-(Date other) const { return days_ - other.days_; }
    auto operator<=>(const Date&) const = default;

private:
    int days_ = 0;
};

// Identifies the (entity, date) origin of a pooled design or residual row.
struct RowKey {
    std::string entity;
    Date date;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Formats with 6 significant digits; the fixed convention for report files.
std::string format_g6(double v);

// FNV-1a 64-bit, used for config provenance digests in artifacts.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

}  // namespace causalpred
