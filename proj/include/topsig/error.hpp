#pragma once

#include <stdexcept>
#include <string>

namespace topsig {

// Error categories double as CLI exit codes (see topsig.h).
enum class ErrorKind : int {
    Config = 2,
    Io = 3,
    Mesh = 4,
    Numerical = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct MeshError : Error {
    explicit MeshError(const std::string& what) : Error(ErrorKind::Mesh, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

} // namespace topsig
