#pragma once

#include <stdexcept>
#include <string>

namespace topseg {

/// File and stream failures; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Config file problems (unknown key, unparsable value). Treated as usage
/// errors by the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A mandatory instance could not be placed within the rejection budget.
class SceneError : public std::runtime_error {
public:
    SceneError(const std::string& what, std::string failing_class)
        : std::runtime_error(what), failing_class_(std::move(failing_class)) {}

    const std::string& failing_class() const { return failing_class_; }

private:
    std::string failing_class_;
};

}  // namespace topseg
