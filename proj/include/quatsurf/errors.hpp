#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace quatsurf {

// Base error carrying enough context for the CLI to emit a machine-readable
// diagnostic: the module and operation that failed and, when applicable,
// the offending grid node.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string op, const std::string& message,
          std::optional<std::size_t> node = std::nullopt)
        : std::runtime_error(module + "." + op + ": " + message),
          module_(std::move(module)), op_(std::move(op)), detail_(message), node_(node) {}

    const std::string& module() const { return module_; }
    const std::string& op() const { return op_; }
    const std::string& detail() const { return detail_; }
    const std::optional<std::size_t>& node() const { return node_; }

private:
    std::string module_;
    std::string op_;
    std::string detail_;
    std::optional<std::size_t> node_;
};

// Bad input: malformed samples, invalid parameters, violated preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure could not produce a trustworthy result
// (degenerate frame, ill-conditioned system, non-closed form).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace quatsurf
