#pragma once

#include <stdexcept>
#include <string>

namespace netres {

/// Failure categories shared by every module. The C API maps these
/// one-to-one onto its status codes.
enum class Errc {
    invalid_argument,
    parse_error,
    infeasible,
    not_converged,
    numerical,
    io,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        fail(Errc::invalid_argument, what);
    }
}

}  // namespace netres
