#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "motionfeas/eval.h"

namespace motionfeas {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF.
// Throws ParseError with the byte offset of an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

// Fixed-point text used by every table writer ("%.6f"; "nan" and "" for absent).
std::string format_fixed(double value, int digits = 6);

}  // namespace motionfeas

namespace motionfeas::eval {

// Columns: pair_id, model_a, model_b, question, outcome, and optionally
// prompt_id (in any position). Header required.
std::vector<PairwiseVote> parse_votes_csv(std::string_view text);

// Columns: video_id, model, prompt_id, then one numeric column per metric.
// Returns metric name -> table.
std::map<std::string, ScoreTable> parse_scores_csv(std::string_view text);

std::string alignment_csv(const AlignmentReport& report);
std::string alignment_text(const AlignmentReport& report);
std::string elo_csv(const EloTable& table);
std::string elo_text(const EloTable& table);
std::string win_matrix_csv(const WinMatrix& matrix);
std::string win_matrix_text(const WinMatrix& matrix);

}  // namespace motionfeas::eval
