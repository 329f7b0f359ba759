#pragma once

namespace sparsalloc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sparsalloc
