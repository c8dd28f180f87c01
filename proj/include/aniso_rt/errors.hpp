#ifndef ANISO_RT_ERRORS_HPP
#define ANISO_RT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aniso_rt {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Simplex volume below the scale-invariant floor (1e-14 * h^d).
struct DegenerateSimplex : Error {
    explicit DegenerateSimplex(const std::string& msg) : Error(msg) {}
};

// No vertex labeling satisfies the canonical-decomposition conditions.
// Unreachable for nondegenerate input; kept as a guard.
struct NoAdmissibleLabeling : Error {
    explicit NoAdmissibleLabeling(const std::string& msg) : Error(msg) {}
};

struct UnsupportedOrder : Error {
    explicit UnsupportedOrder(const std::string& msg) : Error(msg) {}
};

struct UnsupportedDegree : Error {
    explicit UnsupportedDegree(const std::string& msg) : Error(msg) {}
};

struct BadFaceIndex : Error {
    explicit BadFaceIndex(const std::string& msg) : Error(msg) {}
};

// Moment matrix numerically singular (condition estimate > 1e12).
struct UnisolvenceFailure : Error {
    explicit UnisolvenceFailure(const std::string& msg) : Error(msg) {}
};

struct Assumption1Violated : Error {
    explicit Assumption1Violated(const std::string& msg) : Error(msg) {}
};

struct WrongElementType : Error {
    explicit WrongElementType(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

struct DegenerateElement : Error {
    explicit DegenerateElement(const std::string& msg) : Error(msg) {}
};

struct BadSpec : Error {
    explicit BadSpec(const std::string& msg) : Error(msg) {}
};

} // namespace aniso_rt

#endif
