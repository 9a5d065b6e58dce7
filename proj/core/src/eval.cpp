#include "motionfeas/eval.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace motionfeas::eval {

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double human_code(Outcome o) {
  switch (o) {
    case Outcome::kA: return 1.0;
    case Outcome::kB: return -1.0;
    case Outcome::kTie: return 0.0;
  }
  return 0.0;
}

double lookup(const ScoreTable& scores, const std::string& prompt, const std::string& model) {
  auto it = scores.find(VideoKey{prompt, model});
  if (it == scores.end()) {
    throw MissingScoreError("no score for model '" + model + "' on prompt '" + prompt + "'");
  }
  return it->second;
}

double sample_std(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

bool scored(const PairwiseVote& v, const ScoreTable& scores) {
  return scores.contains(VideoKey{v.prompt_id, v.model_a}) &&
         scores.contains(VideoKey{v.prompt_id, v.model_b});
}

}  // namespace

std::string_view to_string(Question q) {
  switch (q) {
    case Question::kBodyStructure: return "body_structure";
    case Question::kBalance: return "balance";
    case Question::kMotionNaturalness: return "motion_naturalness";
  }
  return "body_structure";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kA: return "A";
    case Outcome::kB: return "B";
    case Outcome::kTie: return "tie";
  }
  return "tie";
}

std::optional<Question> parse_question(std::string_view text) {
  const std::string q = lower(text);
  if (q == "body_structure" || q == "body") return Question::kBodyStructure;
  if (q == "balance") return Question::kBalance;
  if (q == "motion_naturalness" || q == "motion") return Question::kMotionNaturalness;
  return std::nullopt;
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  const std::string o = lower(text);
  if (o == "a" || o == "video_a") return Outcome::kA;
  if (o == "b" || o == "video_b") return Outcome::kB;
  if (o == "tie") return Outcome::kTie;
  return std::nullopt;
}

double pairwise_agreement(std::span<const PairwiseVote> votes, const ScoreTable& scores) {
  double credit = 0.0;
  std::size_t decisive = 0;
  for (const auto& v : votes) {
    if (v.outcome == Outcome::kTie) continue;
    const double a = lookup(scores, v.prompt_id, v.model_a);
    const double b = lookup(scores, v.prompt_id, v.model_b);
    ++decisive;
    if (a == b) {
      credit += 0.5;
    } else if ((a > b) == (v.outcome == Outcome::kA)) {
      credit += 1.0;
    }
  }
  if (decisive == 0) throw DegenerateInputError("no decisive votes to compare against");
  return credit / static_cast<double>(decisive);
}

PreferenceCodes preference_codes(std::span<const PairwiseVote> votes, const ScoreTable& scores) {
  PreferenceCodes out;
  out.metric.reserve(votes.size());
  out.human.reserve(votes.size());
  for (const auto& v : votes) {
    const double diff = lookup(scores, v.prompt_id, v.model_a) -
                        lookup(scores, v.prompt_id, v.model_b);
    out.metric.push_back(static_cast<double>((diff > 0.0) - (diff < 0.0)));
    out.human.push_back(human_code(v.outcome));
  }
  return out;
}

std::vector<double> mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank mean((i+1)..j).
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
  if (x.size() < 2) throw DegenerateInputError("spearman_rho needs at least two samples");
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInputError("spearman_rho: constant series");
  return sxy / std::sqrt(sxx * syy);
}

double bootstrap_std(std::span<const double> x, std::span<const double> y,
                     const PairedStatistic& statistic, const BootstrapOptions& options) {
  if (x.size() != y.size()) throw std::invalid_argument("bootstrap_std: length mismatch");
  if (options.resamples < 100) throw std::invalid_argument("bootstrap_std: resamples must be >= 100");
  if (x.empty()) throw DegenerateInputError("bootstrap_std: no samples");

  const std::size_t n = x.size();
  const auto count = static_cast<std::size_t>(options.resamples);
  std::vector<double> stats(count, std::numeric_limits<double>::quiet_NaN());

  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> bx(n), by(n);
    for (std::size_t r = begin; r < end; ++r) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                        static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = static_cast<std::size_t>(rng() % n);
        bx[i] = x[pick];
        by[i] = y[pick];
      }
      try {
        stats[r] = statistic(bx, by);
      } catch (const DegenerateInputError&) {
        // left as NaN and skipped
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.workers)), 1, count);
  if (workers == 1) {
    run(0, count);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  std::vector<double> valid;
  valid.reserve(count);
  for (double s : stats) {
    if (!std::isnan(s)) valid.push_back(s);
  }
  if (valid.size() < 2) throw DegenerateInputError("bootstrap_std: statistic undefined on resamples");
  return sample_std(valid);
}

double EloTable::total() const {
  double sum = 0.0;
  for (const auto& [model, r] : rating) sum += r;
  return sum;
}

EloTable elo_ratings(std::span<const PairwiseVote> votes, const EloOptions& options) {
  EloTable table;
  for (const auto& v : votes) {
    if (v.model_a == v.model_b) throw std::invalid_argument("vote compares a model with itself");
    double& ra = table.rating.try_emplace(v.model_a, options.base_rating).first->second;
    double& rb = table.rating.try_emplace(v.model_b, options.base_rating).first->second;
    const double expected_a = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0));
    const double score_a = v.outcome == Outcome::kA ? 1.0 : v.outcome == Outcome::kB ? 0.0 : 0.5;
    const double delta = options.k_factor * (score_a - expected_a);
    ra += delta;
    rb -= delta;
    ++table.games[v.model_a];
    ++table.games[v.model_b];
  }
  return table;
}

WinMatrix win_matrix(std::span<const PairwiseVote> votes) {
  std::set<std::string> names;
  for (const auto& v : votes) {
    names.insert(v.model_a);
    names.insert(v.model_b);
  }
  WinMatrix m;
  m.models.assign(names.begin(), names.end());
  const std::size_t n = m.models.size();
  auto index = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::lower_bound(m.models.begin(), m.models.end(), name) - m.models.begin());
  };
  std::vector<std::vector<double>> points(n, std::vector<double>(n, 0.0));
  m.games.assign(n, std::vector<std::size_t>(n, 0));
  for (const auto& v : votes) {
    const std::size_t a = index(v.model_a);
    const std::size_t b = index(v.model_b);
    const double score_a = v.outcome == Outcome::kA ? 1.0 : v.outcome == Outcome::kB ? 0.0 : 0.5;
    points[a][b] += score_a;
    points[b][a] += 1.0 - score_a;
    ++m.games[a][b];
    ++m.games[b][a];
  }
  m.rate.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.games[i][j] > 0) {
        m.rate[i][j] = points[i][j] / static_cast<double>(m.games[i][j]);
      }
    }
  }
  return m;
}

std::optional<double> hard_disagreement_rate(std::span<const PairwiseVote> votes) {
  // Winner per annotation, oriented by model name so swapped sides compare.
  std::map<std::pair<std::string, Question>, std::vector<std::string>> groups;
  for (const auto& v : votes) {
    std::string winner;
    if (v.outcome == Outcome::kA) winner = v.model_a;
    if (v.outcome == Outcome::kB) winner = v.model_b;
    groups[{v.pair_id, v.question}].push_back(std::move(winner));
  }
  std::size_t pairs = 0, disagreements = 0;
  for (const auto& [key, winners] : groups) {
    for (std::size_t i = 0; i < winners.size(); ++i) {
      for (std::size_t j = i + 1; j < winners.size(); ++j) {
        ++pairs;
        if (!winners[i].empty() && !winners[j].empty() && winners[i] != winners[j]) {
          ++disagreements;
        }
      }
    }
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(disagreements) / static_cast<double>(pairs);
}

AlignmentReport alignment_report(std::span<const PairwiseVote> votes,
                                 const std::map<std::string, ScoreTable>& metrics,
                                 const BootstrapOptions& bootstrap,
                                 std::optional<Question> only) {
  AlignmentReport report;
  report.hard_disagreement = hard_disagreement_rate(votes);

  // Votes are joinable only if every metric column scores both videos.
  std::vector<PairwiseVote> joined;
  for (const auto& v : votes) {
    bool ok = true;
    for (const auto& [name, table] : metrics) ok = ok && scored(v, table);
    if (ok) {
      joined.push_back(v);
    } else {
      report.join_failures.push_back("pair " + v.pair_id + " (" + v.model_a + " vs " +
                                     v.model_b + ", prompt " + v.prompt_id + ")");
    }
  }

  auto row_for = [&](const std::string& metric, const ScoreTable& table, std::string label,
                     const std::vector<PairwiseVote>& subset) {
    AlignmentRow row;
    row.metric = metric;
    row.question = std::move(label);
    row.votes = subset.size();
    row.decisive = static_cast<std::size_t>(std::count_if(
        subset.begin(), subset.end(), [](const auto& v) { return v.outcome != Outcome::kTie; }));
    if (row.decisive > 0) row.agreement = pairwise_agreement(subset, table);
    const auto codes = preference_codes(subset, table);
    try {
      row.rho = spearman_rho(codes.metric, codes.human);
      row.rho_std = bootstrap_std(codes.metric, codes.human, spearman_rho, bootstrap);
    } catch (const DegenerateInputError&) {
      // left empty
    }
    return row;
  };

  for (const auto& [metric, table] : metrics) {
    for (Question q : kQuestions) {
      if (only && *only != q) continue;
      std::vector<PairwiseVote> subset;
      std::copy_if(joined.begin(), joined.end(), std::back_inserter(subset),
                   [q](const auto& v) { return v.question == q; });
      report.rows.push_back(row_for(metric, table, std::string(to_string(q)), subset));
    }
    if (!only) report.rows.push_back(row_for(metric, table, "all", joined));
  }
  return report;
}

}  // namespace motionfeas::eval
