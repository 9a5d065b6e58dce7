#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace motionfeas::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kParse = 3,
  kIo = 4,
  kConfig = 5,
};

struct ConfigArgs {
  std::string config_path;  // empty: fall back to $MOTIONFEAS_CONFIG
  std::vector<std::string> overrides;
};

struct ScoreArgs {
  std::string file;
  std::string mesh;
  bool json = false;
  bool trace = false;
};

struct BatchArgs {
  std::string dir;
  std::string out;
  int workers = 1;
  bool group_by_prompt = false;
};

struct EvalArgs {
  std::string votes;
  std::string scores;
  std::string question;
  int bootstrap = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
  bool csv = false;
};

struct VoteTableArgs {
  std::string votes;
  std::optional<std::uint64_t> shuffle_seed;
  bool csv = false;
};

int cmd_score(const ScoreArgs& args, const ConfigArgs& config);
int cmd_batch(const BatchArgs& args, const ConfigArgs& config);
int cmd_eval(const EvalArgs& args);
int cmd_elo(const VoteTableArgs& args);
int cmd_winmatrix(const VoteTableArgs& args);
int cmd_selfcheck(bool verbose);

// Maps a caught exception onto an exit code and prints it to stderr.
int report_error(const std::exception& e);

}  // namespace motionfeas::cli
