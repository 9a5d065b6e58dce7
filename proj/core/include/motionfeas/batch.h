#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "motionfeas/config.h"
#include "motionfeas/io.h"
#include "motionfeas/reward.h"

namespace motionfeas {

// Body model and parameters for one document with `config` layered on top.
struct ScoringSetup {
  BodyModel body;
  ScoringParams params;
};

ScoringSetup prepare_scoring(const MotionDocument& doc, const Config& config);

// Reads, configures and scores one file. A separate mesh, when given,
// replaces any mesh stored in the file.
ScoreReport score_file(const std::filesystem::path& path, const Config& config,
                       const ScoreOptions& options = {},
                       const MeshSequence* mesh_override = nullptr);

struct BatchRow {
  std::string file;  // file name only
  std::string subject_id;
  std::string prompt_id;
  std::optional<ScoreReport> report;
  std::string error;  // set when report is empty
  std::optional<double> r_tilde;
};

// Trajectory files (.json, .mft) directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_motion_files(const std::filesystem::path& dir);

using RowSink = std::function<void(const BatchRow&)>;

// Scores every file on a pool of `workers` threads. Rows reach `sink` on
// the calling thread in input order as soon as each prefix is complete.
// Per-file failures become error rows; the batch continues.
std::vector<BatchRow> run_batch(const std::vector<std::filesystem::path>& files,
                                const Config& config, int workers,
                                const RowSink& sink = {});

// Fills r_tilde with normalize_rewards grouped by prompt_id over the rows
// that scored successfully.
void assign_group_rewards(std::vector<BatchRow>& rows);

std::string batch_csv_header(bool with_r_tilde);
std::string batch_csv_row(const BatchRow& row, bool with_r_tilde);

}  // namespace motionfeas
