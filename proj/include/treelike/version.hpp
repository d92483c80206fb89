#pragma once

namespace treelike {

inline constexpr const char* kVersion = "0.1.0";

} // namespace treelike
