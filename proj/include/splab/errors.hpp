#pragma once

#include <stdexcept>
#include <string>

namespace splab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveArgument : Error { using Error::Error; };
struct NotIntegrableAtInfinity : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct ConditionFails : Error { using Error::Error; };
struct MajorantViolation : Error { using Error::Error; };
struct NoDefaultMajorant : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct NoSignChange : Error { using Error::Error; };
struct NonPositiveCell : Error { using Error::Error; };
struct NonPositiveInput : Error { using Error::Error; };
struct MassDefect : Error { using Error::Error; };
struct WrongFamily : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct BadExponent : Error { using Error::Error; };
struct NoMajorant : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct StepFailureError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Config-file syntax error; line is 1-based.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Config value outside its documented range.
struct RangeError : Error {
    std::string key;
    RangeError(std::string key_, const std::string& msg)
        : Error(key_ + ": " + msg), key(std::move(key_)) {}
};

}  // namespace splab
