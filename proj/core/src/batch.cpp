#include "motionfeas/batch.h"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "motionfeas/eval_io.h"

namespace motionfeas {

ScoringSetup prepare_scoring(const MotionDocument& doc, const Config& config) {
  ScoringSetup setup{body_for_document(doc), ScoringParams{}};
  apply_config(config, setup.body, setup.params);
  return setup;
}

ScoreReport score_file(const std::filesystem::path& path, const Config& config,
                       const ScoreOptions& options, const MeshSequence* mesh_override) {
  const MotionDocument doc = read_motion_file(path);
  const ScoringSetup setup = prepare_scoring(doc, config);
  const MeshSequence* mesh = mesh_override ? mesh_override : (doc.mesh ? &*doc.mesh : nullptr);
  return score_trajectory(doc.trajectory, setup.body, mesh, setup.params, options);
}

std::vector<std::filesystem::path> list_motion_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".json" || ext == ".mft") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

namespace {

BatchRow score_row(const std::filesystem::path& path, const Config& config) {
  BatchRow row;
  row.file = path.filename().string();
  try {
    const MotionDocument doc = read_motion_file(path);
    row.subject_id = doc.trajectory.subject_id;
    row.prompt_id = doc.trajectory.prompt_id;
    const ScoringSetup setup = prepare_scoring(doc, config);
    row.report = score_trajectory(doc.trajectory, setup.body, doc.mesh ? &*doc.mesh : nullptr,
                                  setup.params);
  } catch (const ValidationError& e) {
    row.error = e.result().violations.empty() ? e.what() : e.result().violations.front();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<BatchRow> run_batch(const std::vector<std::filesystem::path>& files,
                                const Config& config, int workers, const RowSink& sink) {
  const std::size_t n = files.size();
  std::vector<std::optional<BatchRow>> slots(n);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      BatchRow row = score_row(files[i], config);
      {
        std::lock_guard lock(mutex);
        slots[i] = std::move(row);
      }
      ready.notify_one();
    }
  };

  const std::size_t pool_size =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), std::max<std::size_t>(n, 1));
  std::vector<std::jthread> pool;
  pool.reserve(pool_size);
  for (std::size_t w = 0; w < pool_size; ++w) pool.emplace_back(work);

  std::vector<BatchRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::unique_lock lock(mutex);
    ready.wait(lock, [&] { return slots[i].has_value(); });
    rows.push_back(std::move(*slots[i]));
    slots[i].reset();
    lock.unlock();
    if (sink) sink(rows.back());
  }
  return rows;
}

void assign_group_rewards(std::vector<BatchRow>& rows) {
  std::vector<double> rewards;
  std::vector<std::string> groups;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].report) continue;
    rewards.push_back(rows[i].report->r_motion);
    groups.push_back(rows[i].prompt_id);
    index.push_back(i);
  }
  const auto normalized = normalize_rewards(rewards, groups);
  for (std::size_t k = 0; k < index.size(); ++k) rows[index[k]].r_tilde = normalized[k];
}

std::string batch_csv_header(bool with_r_tilde) {
  std::vector<std::string> cols{"file", "subject_id", "prompt_id"};
  for (auto name : kScoreFieldNames) cols.emplace_back(name);
  if (with_r_tilde) cols.emplace_back("r_tilde");
  cols.emplace_back("flags");
  cols.emplace_back("error");
  return csv_row(cols);
}

std::string batch_csv_row(const BatchRow& row, bool with_r_tilde) {
  std::vector<std::string> cols{row.file, row.subject_id, row.prompt_id};
  for (auto name : kScoreFieldNames) {
    cols.push_back(row.report ? format_fixed(score_field(*row.report, name)) : std::string());
  }
  if (with_r_tilde) cols.push_back(row.r_tilde ? format_fixed(*row.r_tilde) : std::string());
  std::string flags;
  if (row.report) {
    for (const auto& f : row.report->flags) {
      if (!flags.empty()) flags += ';';
      flags += f;
    }
  }
  cols.push_back(flags);
  cols.push_back(row.error);
  return csv_row(cols);
}

}  // namespace motionfeas
