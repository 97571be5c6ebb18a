#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gpt/dynamics.hpp"
#include "gpt/error.hpp"

namespace gpt::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailure = 2,
  kUsage = 64,
  kInadmissible = 65,
  kInternal = 70,
};

int exit_code_for(ErrorKind kind);

/// Runs the command line (without the program name) in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Header "t,u1,u2,u3,energy", 12 significant digits.
std::string trajectory_csv(const dynamics::Trajectory& traj);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace gpt::cli
