#include "run_config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "qwell/errors.hpp"

namespace qwell::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string body = trim(line);
    if (!body.empty() && body.front() == '#') body = trim(body.substr(1));
    const auto eq = body.find('=');
    if (body.empty() || eq == std::string::npos) continue;
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: missing key", path, number));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> splice_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::string command;
  std::vector<std::string> injected;
  for (const auto& [key, value] : load_config_file(path)) {
    if (key == "command") {
      command = value;
      continue;
    }
    if (value.empty()) continue;  // unset string option
    injected.push_back("--" + key + "=" + value);
  }
  // rest[0] is the program name; the first non-option token is the subcommand.
  std::size_t pos = 1;
  while (pos < rest.size() && rest[pos].rfind("-", 0) == 0) ++pos;
  if (pos >= rest.size()) {
    if (command.empty()) throw ConfigError("no subcommand given and none in the config file");
    rest.push_back(command);
  }
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(pos) + 1, injected.begin(),
              injected.end());
  return rest;
}

}  // namespace qwell::cli
