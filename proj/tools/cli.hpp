#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Environment variable naming the config file used when -c is not given.
inline constexpr const char* kConfigEnvVar = "WSNSIM_CONFIG";

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wsn::cli
