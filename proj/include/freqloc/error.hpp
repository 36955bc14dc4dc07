#pragma once

#include <stdexcept>
#include <string>

namespace freqloc {

enum class ErrorKind {
    Domain,
    Range,
    Resolution,
    Truncation,
    Degenerate,
    Usage,
    Validation,
    Accuracy,
    Calibration,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Range: return "range";
        case ErrorKind::Resolution: return "resolution";
        case ErrorKind::Truncation: return "truncation";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Accuracy: return "accuracy";
        case ErrorKind::Calibration: return "calibration";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};
struct RangeError : Error {
    explicit RangeError(const std::string& w) : Error(ErrorKind::Range, w) {}
};
struct ResolutionError : Error {
    explicit ResolutionError(const std::string& w) : Error(ErrorKind::Resolution, w) {}
};
struct TruncationError : Error {
    TruncationError(const std::string& w, double suggested)
        : Error(ErrorKind::Truncation, w), suggested_k_max(suggested) {}
    double suggested_k_max;
};
struct DegenerateBoundError : Error {
    explicit DegenerateBoundError(const std::string& w) : Error(ErrorKind::Degenerate, w) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct AccuracyError : Error {
    explicit AccuracyError(const std::string& w) : Error(ErrorKind::Accuracy, w) {}
};
struct CalibrationError : Error {
    explicit CalibrationError(const std::string& w) : Error(ErrorKind::Calibration, w) {}
};

}  // namespace freqloc
