#pragma once
#include <stdexcept>
#include <string>

namespace bmoext {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct OutsideReachError : Error { using Error::Error; };
struct AmbiguousProjectionError : Error { using Error::Error; };
struct ProjectionConvergenceError : Error {
    ProjectionConvergenceError(const std::string& msg, int iters)
        : Error(msg), iterations(iters) {}
    int iterations;
};
struct NotInNeighborhoodError : Error { using Error::Error; };
struct OutsideChartError : Error { using Error::Error; };

// covering
struct EmptyAtlasError : Error { using Error::Error; };
struct UncoveredPointError : Error { using Error::Error; };

// fields / seminorms
struct EmptyIntersectionError : Error { using Error::Error; };
struct BallNotContainedError : Error { using Error::Error; };
struct NoAdmissibleBallError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };

// extension
struct OutsideBandError : Error { using Error::Error; };

// io / configuration
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace bmoext
