#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace textcomp {

// All library failures throw Error. `kind` is a stable machine-checkable
// identifier (e.g. "UnbalancedBrackets"); `what()` is the human message and
// names the offending file/line/offset when known.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(std::string kind, const std::string& message) {
    throw Error(std::move(kind), message);
}

// Prefix for errors tied to a position in a source file.
inline std::string at_line(const std::string& path, std::size_t line) {
    return path + ":" + std::to_string(line) + ": ";
}

}  // namespace textcomp
