#ifndef LOEWNER_ERRORS_HPP
#define LOEWNER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loewner {

// Base class for all failures raised by the toolkit. The `kind()` string is
// stable and machine-checkable; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};

struct BranchError : Error {
    explicit BranchError(const std::string& msg) : Error("BranchError", msg) {}
};

struct DegenerateError : Error {
    explicit DegenerateError(const std::string& msg) : Error("DegenerateError", msg) {}
};

struct NotSimpleError : Error {
    explicit NotSimpleError(const std::string& msg) : Error("NotSimple", msg) {}
};

struct TipCollisionError : Error {
    explicit TipCollisionError(const std::string& msg) : Error("TipCollision", msg) {}
};

struct StepTooLargeError : Error {
    explicit StepTooLargeError(const std::string& msg) : Error("StepTooLarge", msg) {}
};

struct NonFiniteError : Error {
    explicit NonFiniteError(const std::string& msg) : Error("NonFinite", msg) {}
};

struct HullHitError : Error {
    explicit HullHitError(const std::string& msg) : Error("HullHit", msg) {}
};

struct ResolutionError : Error {
    explicit ResolutionError(const std::string& msg) : Error("ResolutionTooCoarse", msg) {}
};

struct TruncationError : Error {
    explicit TruncationError(const std::string& msg) : Error("TruncationDominates", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError", msg) {}
};

} // namespace loewner

#endif
