#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssattn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kSchemaVersion = "ssattn.report/1";

/// Entry point shared by the executable and the in-process tests. `args`
/// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssattn::cli
