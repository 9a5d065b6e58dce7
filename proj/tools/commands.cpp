#include "commands.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "motionfeas/batch.h"
#include "motionfeas/eval.h"
#include "motionfeas/eval_io.h"
#include "motionfeas/io.h"
#include "motionfeas/reward.h"

namespace motionfeas::cli {

namespace {

Config load_config(const ConfigArgs& args) {
  std::string path = args.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MOTIONFEAS_CONFIG"); env != nullptr) path = env;
  }
  Config config;
  if (!path.empty()) {
    try {
      config = Config::load(path);
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto& assignment : args.overrides) config.set_from_assignment(assignment);
  return config;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string fixed4(double v) { return format_fixed(v, 4); }

void print_report(const ScoreReport& r) {
  std::printf("kinematic   v_vel  %s  v_spen %s  v_lim %s      F_kin %s\n",
              fixed4(r.v_vel).c_str(), fixed4(r.v_spen).c_str(), fixed4(r.v_lim).c_str(),
              fixed4(r.f_kin).c_str());
  std::printf("contact     v_slip %s  v_gpen %s  v_float %s    F_con %s\n",
              fixed4(r.v_slip).c_str(), fixed4(r.v_gpen).c_str(), fixed4(r.v_float).c_str(),
              fixed4(r.f_con).c_str());
  std::printf("            v_bal  %s\n", fixed4(r.v_bal).c_str());
  std::printf("dynamic     s_tau  %s  s_grf  %s  s_met %s      F_dyn %s\n",
              fixed4(r.s_tau).c_str(), fixed4(r.s_grf).c_str(), fixed4(r.s_met).c_str(),
              fixed4(r.f_dyn).c_str());
  std::printf("r_motion    %s\n", fixed4(r.r_motion).c_str());
  if (!r.flags.empty()) {
    std::printf("flags      ");
    for (const auto& f : r.flags) std::printf(" %s", f.c_str());
    std::printf("\n");
  }
}

void print_trace(const Diagnostics& d) {
  std::printf("\n%5s %7s %6s %6s %3s %3s %8s %8s %3s %3s %7s %9s %9s\n", "t", "spen%", "vel",
              "lim", "cL", "cR", "hL", "hR", "fL", "fR", "bal_d", "grf_z", "tau_max");
  const auto T = d.contact.rows();
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto st = static_cast<std::size_t>(t);
    const double spen = st < d.spen_per_frame.size() ? d.spen_per_frame[st] : 0.0;
    const double vel = t < d.velocity_violation_rate.size() ? d.velocity_violation_rate(t) : 0.0;
    std::printf("%5ld %7.3f %6.3f %6.3f %3d %3d %8.4f %8.4f %3d %3d %7.4f %9.2f %9.2f\n",
                static_cast<long>(t), spen, vel, d.limit_violation_rate(t),
                static_cast<int>(d.contact(t, 0)), static_cast<int>(d.contact(t, 1)),
                d.foot_height(t, 0), d.foot_height(t, 1), static_cast<int>(d.float_flags(t, 0)),
                static_cast<int>(d.float_flags(t, 1)), d.balance_distance[st], d.grf(t, 2),
                d.max_torque(t));
  }
  std::printf("raw slip %.6f m  raw gpen %.6f m  spen %.4f%%  MET %.3f  ballistic %s\n",
              d.raw_slip, d.raw_gpen, d.spen_mean, d.met_total, d.ballistic_ok ? "ok" : "failed");
}

std::vector<eval::PairwiseVote> load_votes(const std::string& path) {
  return eval::parse_votes_csv(read_file_bytes(path));
}

}  // namespace

int report_error(const std::exception& e) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    std::cerr << "validation failed:\n";
    for (const auto& msg : v->result().violations) std::cerr << "  " << msg << '\n';
    return kValidation;
  }
  if (dynamic_cast<const ParseError*>(&e)) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  }
  if (dynamic_cast<const IoError*>(&e)) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  if (dynamic_cast<const ConfigError*>(&e)) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  if (dynamic_cast<const Error*>(&e) || dynamic_cast<const std::domain_error*>(&e)) {
    // Inputs that parse but cannot be scored: missing geometry, too few frames.
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  }
  std::cerr << "error: " << e.what() << '\n';
  return kFailure;
}

int cmd_score(const ScoreArgs& args, const ConfigArgs& config_args) {
  const Config config = load_config(config_args);
  const MotionDocument doc = read_motion_file(args.file);
  std::optional<MeshSequence> mesh_override;
  if (!args.mesh.empty()) mesh_override = read_mesh_file(args.mesh);

  const ScoringSetup setup = prepare_scoring(doc, config);
  const MeshSequence* mesh =
      mesh_override ? &*mesh_override : (doc.mesh ? &*doc.mesh : nullptr);
  ScoreOptions options;
  options.with_diagnostics = args.trace;
  const ScoreReport report =
      score_trajectory(doc.trajectory, setup.body, mesh, setup.params, options);

  if (args.json) {
    const Config effective = effective_config(setup.body, setup.params);
    std::cout << report_to_json(report, &effective) << '\n';
  } else {
    print_report(report);
    if (report.diagnostics) print_trace(*report.diagnostics);
  }
  return kOk;
}

int cmd_batch(const BatchArgs& args, const ConfigArgs& config_args) {
  const Config config = load_config(config_args);
  const auto files = list_motion_files(args.dir);

  // Reject a bad config once instead of once per row.
  if (!config.empty() && !files.empty()) {
    try {
      (void)prepare_scoring(read_motion_file(files.front()), config);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error&) {
      // That file's own problem; it will show up as an error row.
    }
  }

  std::ostringstream csv;
  csv << batch_csv_header(args.group_by_prompt);
  std::vector<BatchRow> rows;
  if (args.group_by_prompt) {
    rows = run_batch(files, config, args.workers);
    assign_group_rewards(rows);
    for (const auto& row : rows) csv << batch_csv_row(row, true);
  } else {
    rows = run_batch(files, config, args.workers,
                     [&](const BatchRow& row) { csv << batch_csv_row(row, false); });
  }
  write_output(args.out, csv.str());

  const auto failed = std::count_if(rows.begin(), rows.end(),
                                    [](const BatchRow& r) { return !r.report.has_value(); });
  if (failed > 0) {
    std::cerr << "warning: " << failed << " of " << rows.size() << " file(s) failed:\n";
    for (const auto& r : rows) {
      if (!r.report) std::cerr << "  " << r.file << ": " << r.error << '\n';
    }
  }
  return kOk;
}

int cmd_eval(const EvalArgs& args) {
  const auto votes = load_votes(args.votes);
  const auto metrics = eval::parse_scores_csv(read_file_bytes(args.scores));
  std::optional<eval::Question> only;
  if (!args.question.empty()) {
    only = eval::parse_question(args.question);
    if (!only) throw ConfigError("unknown question '" + args.question + "'");
  }
  eval::BootstrapOptions boot;
  boot.resamples = args.bootstrap;
  boot.seed = args.seed;
  boot.workers = args.workers;
  const auto report = eval::alignment_report(votes, metrics, boot, only);

  std::cout << (args.csv ? eval::alignment_csv(report) : eval::alignment_text(report));
  if (args.csv && !report.join_failures.empty()) {
    std::cerr << report.join_failures.size() << " vote(s) dropped for missing scores:\n";
    for (const auto& f : report.join_failures) std::cerr << "  " << f << '\n';
  }
  if (!votes.empty() && report.join_failures.size() == votes.size()) {
    std::cerr << "no vote could be joined to the scores\n";
    return kValidation;
  }
  return kOk;
}

int cmd_elo(const VoteTableArgs& args) {
  auto votes = load_votes(args.votes);
  if (args.shuffle_seed) {
    std::mt19937_64 rng(*args.shuffle_seed);
    std::shuffle(votes.begin(), votes.end(), rng);
  }
  const auto table = eval::elo_ratings(votes);
  std::cout << (args.csv ? eval::elo_csv(table) : eval::elo_text(table));
  return kOk;
}

int cmd_winmatrix(const VoteTableArgs& args) {
  const auto votes = load_votes(args.votes);
  const auto matrix = eval::win_matrix(votes);
  std::cout << (args.csv ? eval::win_matrix_csv(matrix) : eval::win_matrix_text(matrix));
  return kOk;
}

}  // namespace motionfeas::cli
