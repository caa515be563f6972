#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace bayescp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIngest = 3;
inline constexpr int kExitNumerical = 4;

// Parses the arguments (without the program name) and runs one subcommand.
// Documents go to --out when given, written atomically, and to `out`
// otherwise. Diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Exit code for an exception escaping a subcommand.
int exit_code_for(const std::exception& e);

// A log-scale value as JSON: a number when finite, the string "-inf" for
// log zero.
nlohmann::ordered_json log_value(double v);

// Writes `contents` to a temporary file next to `path` and renames it into
// place, so readers never see a partial document.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace bayescp::cli
