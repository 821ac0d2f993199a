#pragma once

#include <optional>

#include "twistfactor/error.hpp"

// Error code thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<twistfactor::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const twistfactor::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
