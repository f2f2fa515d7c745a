#pragma once

#include <iosfwd>

namespace magpol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPhysics = 3;

/// Entry point of the `magpol` tool with injectable streams. Returns the process exit
/// code: 0 on success, 2 for configuration or input errors, 3 when the physics rules
/// the request out (for example no exceptional point exists).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magpol::cli
