#pragma once

#include <string>
#include <vector>

namespace rankweight::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one subcommand. Returns 0 on success, 1 on usage errors and 2 on
/// data errors.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

}  // namespace rankweight::cli
