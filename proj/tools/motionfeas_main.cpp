#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "commands.h"

using namespace motionfeas::cli;

int main(int argc, char** argv) {
  CLI::App app{"Physical feasibility scoring for human motion trajectories"};
  app.require_subcommand(1);

  ConfigArgs config;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config.config_path,
                    "Threshold file (default: $MOTIONFEAS_CONFIG)");
    cmd->add_option("--set", config.overrides, "Override one key, e.g. contact.height_max=0.03")
        ->take_all();
  };

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score one trajectory file");
  score_cmd->add_option("file", score.file, "Trajectory (.json or MFT1 binary)")->required();
  score_cmd->add_option("--mesh", score.mesh, "Mesh sequence overriding the file's mesh");
  score_cmd->add_flag("--json", score.json, "Print the report as one JSON object");
  score_cmd->add_flag("--trace", score.trace, "Include per-frame diagnostics");
  add_config(score_cmd);

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Score every trajectory in a directory");
  batch_cmd->add_option("dir", batch.dir, "Directory of .json/.mft files")->required();
  batch_cmd->add_option("--out", batch.out, "CSV output path (default: stdout)");
  batch_cmd->add_option("--workers", batch.workers, "Scoring threads")
      ->check(CLI::Range(1, 256));
  batch_cmd->add_flag("--group-by-prompt", batch.group_by_prompt,
                      "Add group-normalized rewards per prompt");
  add_config(batch_cmd);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Metric vs human alignment");
  eval_cmd->add_option("votes", eval.votes, "Votes CSV")->required();
  eval_cmd->add_option("scores", eval.scores, "Scores CSV")->required();
  eval_cmd->add_option("--question", eval.question,
                       "body_structure, balance or motion_naturalness");
  eval_cmd->add_option("--bootstrap", eval.bootstrap, "Bootstrap resamples")
      ->check(CLI::Range(100, 1000000));
  eval_cmd->add_option("--seed", eval.seed, "Bootstrap seed");
  eval_cmd->add_option("--workers", eval.workers, "Bootstrap threads")
      ->check(CLI::Range(1, 256));
  eval_cmd->add_flag("--csv", eval.csv, "CSV instead of a text table");

  VoteTableArgs elo;
  auto* elo_cmd = app.add_subcommand("elo", "Elo ratings from pairwise votes");
  elo_cmd->add_option("votes", elo.votes, "Votes CSV")->required();
  elo_cmd->add_option("--shuffle-seed", elo.shuffle_seed,
                      "Process votes in a seeded random order");
  elo_cmd->add_flag("--csv", elo.csv, "CSV instead of a text table");

  VoteTableArgs wins;
  auto* win_cmd = app.add_subcommand("winmatrix", "Pairwise win-rate matrix");
  win_cmd->add_option("votes", wins.votes, "Votes CSV")->required();
  win_cmd->add_flag("--csv", wins.csv, "CSV instead of a text table");

  bool verbose = false;
  auto* self_cmd = app.add_subcommand("selfcheck", "Run the built-in fixture suite");
  self_cmd->add_flag("-v,--verbose", verbose, "Show measured values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*score_cmd) return cmd_score(score, config);
    if (*batch_cmd) return cmd_batch(batch, config);
    if (*eval_cmd) return cmd_eval(eval);
    if (*elo_cmd) return cmd_elo(elo);
    if (*win_cmd) return cmd_winmatrix(wins);
    if (*self_cmd) return cmd_selfcheck(verbose);
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return kFailure;
}
