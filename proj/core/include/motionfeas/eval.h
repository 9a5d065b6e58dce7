#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motionfeas/errors.h"

namespace motionfeas::eval {

enum class Question { kBodyStructure, kBalance, kMotionNaturalness };
enum class Outcome { kA, kB, kTie };

inline constexpr std::array<Question, 3> kQuestions = {
    Question::kBodyStructure, Question::kBalance, Question::kMotionNaturalness};

std::string_view to_string(Question q);
std::string_view to_string(Outcome o);
std::optional<Question> parse_question(std::string_view text);
std::optional<Outcome> parse_outcome(std::string_view text);

struct PairwiseVote {
  std::string pair_id;
  std::string prompt_id;  // defaults to pair_id when the votes file has no prompt column
  std::string model_a;
  std::string model_b;
  Question question = Question::kBodyStructure;
  Outcome outcome = Outcome::kTie;
};

// A generated video is identified by its prompt and the model that made it.
struct VideoKey {
  std::string prompt_id;
  std::string model;

  auto operator<=>(const VideoKey&) const = default;
};

using ScoreTable = std::map<VideoKey, double>;

// Fraction of decisive human votes whose winner the metric also scores
// higher. Metric ties earn half credit; human ties are skipped. Throws
// MissingScoreError when a decisive vote has no score and
// DegenerateInputError when no vote is decisive.
double pairwise_agreement(std::span<const PairwiseVote> votes, const ScoreTable& scores);

// Per-vote preference codes in {-1, 0, +1}: metric = sign(score_a - score_b),
// human = +1 for A, -1 for B, 0 for a tie.
struct PreferenceCodes {
  std::vector<double> metric;
  std::vector<double> human;
};

PreferenceCodes preference_codes(std::span<const PairwiseVote> votes, const ScoreTable& scores);

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

// Pearson correlation of mid-ranks. Throws DegenerateInputError for fewer
// than two samples or a constant series.
double spearman_rho(std::span<const double> x, std::span<const double> y);

using PairedStatistic = std::function<double(std::span<const double>, std::span<const double>)>;

struct BootstrapOptions {
  int resamples = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
};

// Standard deviation (n - 1) of the statistic over paired resamples drawn
// with replacement. Resample i draws from its own generator seeded by
// (seed, i), so the result does not depend on the worker count. Resamples
// on which the statistic raises DegenerateInputError are skipped.
double bootstrap_std(std::span<const double> x, std::span<const double> y,
                     const PairedStatistic& statistic, const BootstrapOptions& options = {});

struct EloOptions {
  double base_rating = 1500.0;
  double k_factor = 32.0;
};

struct EloTable {
  std::map<std::string, double> rating;
  std::map<std::string, std::size_t> games;

  double total() const;
};

// Single sequential pass in input order.
EloTable elo_ratings(std::span<const PairwiseVote> votes, const EloOptions& options = {});

struct WinMatrix {
  std::vector<std::string> models;  // sorted
  // rate[i][j] = (wins_i + 0.5 ties) / games(i, j); absent with no games.
  std::vector<std::vector<std::optional<double>>> rate;
  std::vector<std::vector<std::size_t>> games;
};

WinMatrix win_matrix(std::span<const PairwiseVote> votes);

// Among votes sharing (pair_id, question), the fraction of annotator pairs
// making opposite hard choices. Ties are compatible with either side.
// Returns nullopt when no pair_id repeats.
std::optional<double> hard_disagreement_rate(std::span<const PairwiseVote> votes);

struct AlignmentRow {
  std::string metric;
  std::string question;  // a question name or "all"
  std::size_t votes = 0;
  std::size_t decisive = 0;
  std::optional<double> agreement;
  std::optional<double> rho;
  std::optional<double> rho_std;
};

struct AlignmentReport {
  std::vector<AlignmentRow> rows;
  std::vector<std::string> join_failures;  // votes dropped for missing scores
  std::optional<double> hard_disagreement;  // over all votes, see hard_disagreement_rate
};

// Agreement and Spearman rho (with bootstrap std) per metric column, per
// question and pooled. A non-empty `only` restricts the per-question rows.
AlignmentReport alignment_report(std::span<const PairwiseVote> votes,
                                 const std::map<std::string, ScoreTable>& metrics,
                                 const BootstrapOptions& bootstrap = {},
                                 std::optional<Question> only = std::nullopt);

}  // namespace motionfeas::eval
