#pragma once

#include <stdexcept>
#include <string>

namespace shelving {

/// Invalid scheme or manifest. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class AnalysisError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Misuse of the graph/engine API (collapsing a realized component, etc).
class StateError : public std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace shelving
