#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace meltline {

/// Runtime failure with a stable machine-readable code ("MissingColumn",
/// "SeriesGap", ...). The code travels with the exception so the CLI can emit
/// error JSON and tests can assert on the exact failure kind.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace meltline
