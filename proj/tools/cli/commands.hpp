#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace spectral::cli {

const std::vector<std::string>& command_names();

/// Runs one subcommand and writes its files into `out_dir` as <prefix>_<command>.{csv,json}.
/// Returns the paths written. Errors propagate: ConfigError for missing inputs, IoError,
/// and the library's numerical exceptions.
std::vector<std::filesystem::path> run_command(const std::string& name, const RunSpec& spec,
                                               const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace spectral::cli
