#pragma once

#include <doctest.h>

#include <cmath>

#include "core/error.hpp"

namespace netres::test {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename F>
Errc error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a netres::Error");
    return Errc::invalid_argument;
}

}  // namespace netres::test
