#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qwell::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Reads "key = value" lines. A leading "#" before the key is accepted so the
/// metadata block of an output file can be fed back unchanged; lines without
/// "=" and blank lines are skipped. Throws ConfigError on unreadable files.
KeyValues load_config_file(const std::string& path);

/// Expands `--config <path>` (or `--config=<path>`) into "--key=value" tokens
/// placed right after the subcommand, so later command-line flags win. A
/// `command` entry supplies the subcommand when none is given.
std::vector<std::string> splice_config(const std::vector<std::string>& args);

}  // namespace qwell::cli
