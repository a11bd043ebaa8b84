#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sketchmo {

// Base for every error raised by the library. `kind()` is a stable tag used by
// the service and CLI layers to pick status codes and exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed BVH text; carries the 1-based line where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed text whose contents violate Skeleton/Motion invariants.
class StructureError : public Error {
public:
    explicit StructureError(const std::string& what) : Error("structure", what) {}
};

// Unknown joint name, role, entry id or session id.
class LookupError : public Error {
public:
    explicit LookupError(const std::string& what) : Error("lookup", what) {}
};

class TrimError : public Error {
public:
    explicit TrimError(const std::string& what) : Error("trim", what) {}
};

class MappingError : public Error {
public:
    explicit MappingError(const std::string& what) : Error("mapping", what) {}
};

class BuildError : public Error {
public:
    explicit BuildError(const std::string& what) : Error("build", what) {}
};

// Degenerate camera or invalid camera action parameters.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class ProjectionError : public Error {
public:
    explicit ProjectionError(const std::string& what) : Error("projection", what) {}
};

class DegenerateStrokeError : public Error {
public:
    explicit DegenerateStrokeError(const std::string& what) : Error("degenerate_stroke", what) {}
};

class QueryError : public Error {
public:
    explicit QueryError(const std::string& what) : Error("query", what) {}
};

class CompositionError : public Error {
public:
    explicit CompositionError(const std::string& what) : Error("composition", what) {}
};

class AssignmentConflict : public Error {
public:
    explicit AssignmentConflict(const std::string& what) : Error("assignment_conflict", what) {}
};

class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& what) : Error("evaluation", what) {}
};

// Operation not permitted in the current session state.
class StateError : public Error {
public:
    explicit StateError(const std::string& what) : Error("state", what) {}
};

}  // namespace sketchmo
