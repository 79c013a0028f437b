#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sumform {

// Every failure carries a stable machine-readable code ("backend-mismatch",
// "sum-not-one", ...) next to the human message; the CLI forwards the code
// verbatim in its stderr JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace sumform
