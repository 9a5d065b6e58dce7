#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "motionfeas/fixtures.h"
#include "motionfeas/io.h"
#include "oracles.h"

using namespace motionfeas;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MOTIONFEAS_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kVotes =
    "pair_id,prompt_id,model_a,model_b,question,outcome\n"
    "1,walk,good,bad,balance,A\n"
    "2,walk,bad,good,body_structure,B\n"
    "3,run,good,bad,motion_naturalness,A\n"
    "4,run,good,bad,balance,B\n";

const char* kScores =
    "video_id,model,prompt_id,r_motion\n"
    "v1,good,walk,0.9\nv2,bad,walk,0.2\nv3,good,run,0.8\nv4,bad,run,0.3\n";

}  // namespace

TEST(Cli, ScoresStandingFixture) {
  oracle::TempDir dir("cli-score");
  write_motion_file(dir / "stand.json", fixtures::standing(16, true));
  const auto r = run("score " + q(dir / "stand.json"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("r_motion    1.0000"), std::string::npos) << r.out;
}

TEST(Cli, JsonReportHasEveryField) {
  oracle::TempDir dir("cli-json");
  write_motion_file(dir / "sway.mft", fixtures::swaying(3), true);
  const auto r = run("score --json " + q(dir / "sway.mft"));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"v_vel", "v_spen", "v_lim", "v_slip", "v_gpen", "v_float", "v_bal",
                        "s_tau", "s_grf", "s_met", "f_kin", "f_con", "f_dyn", "r_motion"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
}

TEST(Cli, ExitCodes) {
  oracle::TempDir dir("cli-codes");
  std::ofstream(dir / "bad.json") << "{\"version\": 1, \"frames\": [1, 2,, 3]}";
  const auto parse = run("score " + q(dir / "bad.json"));
  EXPECT_EQ(parse.status, 3) << parse.out;
  EXPECT_NE(parse.out.find("at byte"), std::string::npos) << parse.out;

  EXPECT_EQ(run("score " + q(dir / "absent.json")).status, 4);

  write_motion_file(dir / "stand.json", fixtures::standing(4, false));
  std::ofstream(dir / "bad.cfg") << "contact.no_such_key = 1\n";
  EXPECT_EQ(run("score --config " + q(dir / "bad.cfg") + " " + q(dir / "stand.json")).status, 5);
  EXPECT_EQ(run("score --set contact.height_max=oops " + q(dir / "stand.json")).status, 5);

  auto doc = fixtures::standing(4, false);
  doc.trajectory.frames.resize(1);
  write_motion_file(dir / "short.json", doc);
  const auto invalid = run("score " + q(dir / "short.json"));
  EXPECT_EQ(invalid.status, 2) << invalid.out;

  EXPECT_NE(run("").status, 0);
}

TEST(Cli, ConfigOverrideChangesScore) {
  oracle::TempDir dir("cli-set");
  write_motion_file(dir / "sway.json", fixtures::swaying(1));
  const auto base = run("score --json " + q(dir / "sway.json"));
  const auto strict = run("score --json --set dynamics.met_norm=1 " + q(dir / "sway.json"));
  ASSERT_EQ(base.status, 0);
  ASSERT_EQ(strict.status, 0) << strict.out;
  EXPECT_LE(nlohmann::json::parse(strict.out)["s_met"].get<double>(),
            nlohmann::json::parse(base.out)["s_met"].get<double>());
}

TEST(Cli, BatchIsByteIdenticalAcrossWorkers) {
  oracle::TempDir dir("cli-batch");
  std::filesystem::create_directory(dir / "in");
  for (std::size_t i = 0; i < 8; ++i) {
    write_motion_file(dir / ("in/s" + std::to_string(i) + ".json"), fixtures::swaying(i));
  }
  const auto a = run("batch " + q(dir / "in") + " --workers 1 --out " + q(dir / "a.csv"));
  const auto b = run("batch " + q(dir / "in") + " --workers 6 --out " + q(dir / "b.csv"));
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  const auto text = slurp(dir / "a.csv");
  EXPECT_EQ(text, slurp(dir / "b.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);

  const auto grouped = run("batch " + q(dir / "in") + " --group-by-prompt");
  ASSERT_EQ(grouped.status, 0) << grouped.out;
  EXPECT_NE(grouped.out.find("r_tilde"), std::string::npos);
}

TEST(Cli, EvaluationCommands) {
  oracle::TempDir dir("cli-eval");
  std::ofstream(dir / "votes.csv") << kVotes;
  std::ofstream(dir / "scores.csv") << kScores;
  const auto eval = run("eval " + q(dir / "votes.csv") + " " +
                        q(dir / "scores.csv") + " --bootstrap 100 --csv");
  ASSERT_EQ(eval.status, 0) << eval.out;
  EXPECT_NE(eval.out.find("r_motion,all,4,4,0.750000"), std::string::npos) << eval.out;

  const auto elo = run("elo " + q(dir / "votes.csv") + " --csv");
  ASSERT_EQ(elo.status, 0) << elo.out;
  EXPECT_EQ(elo.out.rfind("model,rating,games\ngood,", 0), 0u) << elo.out;

  const auto wm = run("winmatrix " + q(dir / "votes.csv") + " --csv");
  ASSERT_EQ(wm.status, 0) << wm.out;
  EXPECT_NE(wm.out.find("good,0.750000,"), std::string::npos) << wm.out;

  const auto bad_q = run("eval " + q(dir / "votes.csv") + " " +
                         q(dir / "scores.csv") + " --question style");
  EXPECT_EQ(bad_q.status, 5) << bad_q.out;
}

TEST(Cli, Selfcheck) {
  const auto r = run("selfcheck");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("0 failed"), std::string::npos) << r.out;
}
