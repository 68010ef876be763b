#pragma once

#include <string>
#include <vector>

namespace jscity::test {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

/// Runs the jscity binary with `args` (shell-quoted here) and waits for it.
/// `env` is prepended to the command line (e.g. "JSCITY_STORE=/tmp/x").
RunResult run_cli(const std::vector<std::string>& args, const std::string& env = "",
                  bool include_stderr = true);

std::string shell_quote(const std::string& s);

/// The jscity binary running in the background with stdout on a pipe.
class BackgroundCli {
 public:
  explicit BackgroundCli(const std::vector<std::string>& args);
  ~BackgroundCli();
  BackgroundCli(const BackgroundCli&) = delete;
  BackgroundCli& operator=(const BackgroundCli&) = delete;

  /// Next stdout line without the newline; empty at end of stream.
  std::string read_line();
  /// Sends SIGTERM and returns the exit code (-1 if killed by a signal).
  int terminate();

 private:
  int pid_ = -1;
  int out_fd_ = -1;
  std::string pending_;
};

}  // namespace jscity::test
