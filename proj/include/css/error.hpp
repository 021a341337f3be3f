#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace css {

enum class ErrorKind {
    Parameter,   // invalid input or configuration
    Numeric,     // non-finite values, ill-conditioning
    Solver,      // iteration failed to converge
    Infeasible,  // admissible set empty or configuration outside the valid regime
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Non-fatal diagnostics. The default handler prints to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace css
