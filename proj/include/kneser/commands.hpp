#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kneser/error.hpp"
#include "kneser/scenario.hpp"

namespace kneser {

struct CommandOptions {
  // Directory for CSV and JSON artifacts; nothing is written when empty.
  std::string out_dir;
  std::optional<std::size_t> nodes;
  std::optional<PolarGrid> grid;
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;  // 0 ok, 3 when a numerical guard tripped
};

const std::vector<std::string>& command_names();

// Runs one command. Throws Error; callers map spec errors to exit code 2.
CommandResult run_command(const std::string& command, const Scenario& scenario, const CommandOptions& options);

// {"error": {"code", "class", "message"}}
nlohmann::json error_report(ErrorCode code, const std::string& message);

// Exit code for an error: 2 for spec errors, 3 otherwise.
int exit_code_for(ErrorCode code);

}  // namespace kneser
