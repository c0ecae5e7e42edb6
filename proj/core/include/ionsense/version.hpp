#pragma once

namespace ionsense {

inline constexpr const char* version = "0.1.0";

}  // namespace ionsense
