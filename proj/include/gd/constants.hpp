#pragma once

#include <numbers>

namespace gd {

inline constexpr double pi = std::numbers::pi;

}  // namespace gd
