#pragma once

// Command-line front end: expand, verify, certify, density, table.
// Exit codes: 0 success, 1 a verification or certification failed, 2 usage.

#include <iosfwd>
#include <string>
#include <vector>

namespace pmod2::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Writes content to path through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace pmod2::cli
