#include "motionfeas/eval_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace motionfeas {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  std::size_t quote_start = 0;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && row.front().empty() && !row_has_content;
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        quote_start = i;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        row_has_content = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", quote_start);
  if (!field.empty() || !row.empty() || row_has_content) end_row();
  return rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_field(fields[i]);
  }
  out.push_back('\n');
  return out;
}

std::string format_fixed(double value, int digits) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s = buf;
  // Avoid "-0.000000".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace motionfeas

namespace motionfeas::eval {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[trim(header[i])] = i;
  return idx;
}

std::size_t require(const std::map<std::string, std::size_t>& idx, const std::string& name,
                    std::string_view file) {
  auto it = idx.find(name);
  if (it == idx.end()) {
    throw ParseError(std::string(file) + ": missing column '" + name + "'");
  }
  return it->second;
}

const std::string& cell(const std::vector<std::string>& row, std::size_t i, std::size_t line) {
  if (i >= row.size()) {
    throw ParseError("row " + std::to_string(line) + " has too few columns");
  }
  return row[i];
}

std::string opt_text(const std::optional<double>& v, int digits = 4) {
  return v ? format_fixed(*v, digits) : "-";
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::vector<PairwiseVote> parse_votes_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ParseError("votes file is empty");
  const auto idx = header_index(rows.front());
  const auto c_pair = require(idx, "pair_id", "votes");
  const auto c_a = require(idx, "model_a", "votes");
  const auto c_b = require(idx, "model_b", "votes");
  const auto c_q = require(idx, "question", "votes");
  const auto c_o = require(idx, "outcome", "votes");
  const auto prompt_it = idx.find("prompt_id");

  std::vector<PairwiseVote> votes;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    PairwiseVote v;
    v.pair_id = trim(cell(row, c_pair, line));
    v.model_a = trim(cell(row, c_a, line));
    v.model_b = trim(cell(row, c_b, line));
    v.prompt_id = prompt_it != idx.end() ? trim(cell(row, prompt_it->second, line)) : v.pair_id;
    if (v.prompt_id.empty()) v.prompt_id = v.pair_id;
    const auto q = parse_question(trim(cell(row, c_q, line)));
    if (!q) throw ParseError("row " + std::to_string(line) + ": unknown question '" + row[c_q] + "'");
    const auto o = parse_outcome(trim(cell(row, c_o, line)));
    if (!o) throw ParseError("row " + std::to_string(line) + ": unknown outcome '" + row[c_o] + "'");
    v.question = *q;
    v.outcome = *o;
    if (v.model_a == v.model_b) {
      throw ParseError("row " + std::to_string(line) + ": model_a equals model_b");
    }
    votes.push_back(std::move(v));
  }
  return votes;
}

std::map<std::string, ScoreTable> parse_scores_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ParseError("scores file is empty");
  const auto& header = rows.front();
  const auto idx = header_index(header);
  const auto c_video = require(idx, "video_id", "scores");
  const auto c_model = require(idx, "model", "scores");
  const auto c_prompt = require(idx, "prompt_id", "scores");

  std::vector<std::pair<std::string, std::size_t>> metric_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == c_video || i == c_model || i == c_prompt) continue;
    metric_cols.emplace_back(trim(header[i]), i);
  }
  if (metric_cols.empty()) throw ParseError("scores file has no metric columns");

  std::map<std::string, ScoreTable> tables;
  for (const auto& [name, col] : metric_cols) tables[name];
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    VideoKey key{trim(cell(row, c_prompt, line)), trim(cell(row, c_model, line))};
    for (const auto& [name, col] : metric_cols) {
      const std::string s = trim(cell(row, col, line));
      if (s.empty()) continue;
      double value = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("row " + std::to_string(line) + ": column '" + name +
                         "' is not a number: '" + s + "'");
      }
      tables[name][key] = value;
    }
  }
  return tables;
}

std::string alignment_csv(const AlignmentReport& report) {
  std::string out = csv_row({"metric", "question", "votes", "decisive", "agreement", "rho", "rho_std",
                            "hard_disagreement"});
  auto opt = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string(); };
  for (const auto& row : report.rows) {
    out += csv_row({row.metric, row.question, std::to_string(row.votes),
                    std::to_string(row.decisive), opt(row.agreement), opt(row.rho),
                    opt(row.rho_std), opt(report.hard_disagreement)});
  }
  return out;
}

std::string alignment_text(const AlignmentReport& report) {
  std::ostringstream os;
  os << pad("metric", 16, true) << pad("question", 20, true) << pad("votes", 7)
     << pad("agree", 9) << pad("rho", 18) << '\n';
  for (const auto& row : report.rows) {
    std::string rho = opt_text(row.rho);
    if (row.rho && row.rho_std) rho += " +- " + format_fixed(*row.rho_std, 4);
    os << pad(row.metric, 16, true) << pad(row.question, 20, true)
       << pad(std::to_string(row.votes), 7) << pad(opt_text(row.agreement), 9) << pad(rho, 18)
       << '\n';
  }
  if (report.hard_disagreement) {
    os << "hard disagreement rate (repeated pair_ids): " << format_fixed(*report.hard_disagreement, 4)
       << '\n';
  }
  if (!report.join_failures.empty()) {
    os << report.join_failures.size() << " vote(s) dropped for missing scores:\n";
    for (const auto& f : report.join_failures) os << "  " << f << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::pair<std::string, double>> ranked(const EloTable& table) {
  std::vector<std::pair<std::string, double>> rows(table.rating.begin(), table.rating.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

}  // namespace

std::string elo_csv(const EloTable& table) {
  std::string out = csv_row({"model", "rating", "games"});
  for (const auto& [model, rating] : ranked(table)) {
    out += csv_row({model, format_fixed(rating, 2), std::to_string(table.games.at(model))});
  }
  return out;
}

std::string elo_text(const EloTable& table) {
  std::ostringstream os;
  os << pad("model", 24, true) << pad("rating", 10) << pad("games", 8) << '\n';
  for (const auto& [model, rating] : ranked(table)) {
    os << pad(model, 24, true) << pad(format_fixed(rating, 2), 10)
       << pad(std::to_string(table.games.at(model)), 8) << '\n';
  }
  return os.str();
}

std::string win_matrix_csv(const WinMatrix& matrix) {
  std::vector<std::string> header{"model"};
  header.insert(header.end(), matrix.models.begin(), matrix.models.end());
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < matrix.models.size(); ++i) {
    std::vector<std::string> row{matrix.models[i]};
    for (std::size_t j = 0; j < matrix.models.size(); ++j) {
      row.push_back(matrix.rate[i][j] ? format_fixed(*matrix.rate[i][j]) : std::string());
    }
    out += csv_row(row);
  }
  return out;
}

std::string win_matrix_text(const WinMatrix& matrix) {
  std::size_t width = 8;
  for (const auto& m : matrix.models) width = std::max(width, m.size() + 2);
  std::ostringstream os;
  os << pad("", width, true);
  for (const auto& m : matrix.models) os << pad(m, width);
  os << '\n';
  for (std::size_t i = 0; i < matrix.models.size(); ++i) {
    os << pad(matrix.models[i], width, true);
    for (std::size_t j = 0; j < matrix.models.size(); ++j) {
      os << pad(opt_text(matrix.rate[i][j], 3), width);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace motionfeas::eval
