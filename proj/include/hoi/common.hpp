#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hoi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Contiguous 3D point lists. std::vector of fixed-size Eigen types is fine
// with C++17 aligned new.
using Points2 = std::vector<Vec2>;
using Points3 = std::vector<Vec3>;

enum class ErrorKind {
    InvalidInput,
    DegenerateNormal,
    DegenerateConfiguration,
    BehindCamera,
    OptimizationFailure,
    NoCandidate,
    ParseError,
    SanityError,
    NormalizationFailure,
    MissingPart,
    MissingPrior,
    CacheMiss,
    Network,
    Io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::DegenerateNormal: return "degenerate-normal";
        case ErrorKind::DegenerateConfiguration: return "degenerate-configuration";
        case ErrorKind::BehindCamera: return "behind-camera";
        case ErrorKind::OptimizationFailure: return "optimization-failure";
        case ErrorKind::NoCandidate: return "no-candidate";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::SanityError: return "sanity-error";
        case ErrorKind::NormalizationFailure: return "normalization-failure";
        case ErrorKind::MissingPart: return "missing-part";
        case ErrorKind::MissingPrior: return "missing-prior";
        case ErrorKind::CacheMiss: return "cache-miss";
        case ErrorKind::Network: return "network";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

/// Library-wide exception. `kind()` is the machine-readable category; the
/// message carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorKind::InvalidInput, message);
}

}  // namespace hoi
