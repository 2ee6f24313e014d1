#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace expertrank {

// Data-level failure (bad input file, broken reference, checksum mismatch, ...).
// `code` is a stable machine-readable token; the CLI prints it as
// "ERROR <code>: <message>" and exits 1. Usage errors (bad flags) never reach
// this type — they are handled at flag parsing and exit 2.
class data_error : public std::runtime_error {
public:
    data_error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw data_error(std::move(code), message);
}

} // namespace expertrank
