#ifndef SCDEPTH_TOOLS_CLI_HPP
#define SCDEPTH_TOOLS_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace scdepth::cli {

/// Exit codes of `dispatch`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Run one subcommand. `args[0]` is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

} // namespace scdepth::cli

#endif
