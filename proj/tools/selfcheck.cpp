#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "commands.h"
#include "motionfeas/batch.h"
#include "motionfeas/eval.h"
#include "motionfeas/fixtures.h"
#include "motionfeas/geometry.h"
#include "motionfeas/kinematic.h"
#include "motionfeas/nft.h"
#include "motionfeas/reward.h"

namespace motionfeas::cli {

namespace {

struct Check {
  const char* name;
  std::function<std::string(bool&)> run;  // returns the measured value
};

ScoreReport score_fixture(const MotionDocument& doc) {
  const ScoringSetup setup = prepare_scoring(doc, Config{});
  return score_trajectory(doc.trajectory, setup.body, doc.mesh ? &*doc.mesh : nullptr,
                          setup.params, ScoreOptions{true});
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int cmd_selfcheck(bool verbose) {
  const std::vector<Check> checks = {
      {"standing pose scores 1",
       [](bool& ok) {
         const auto r = score_fixture(fixtures::standing());
         ok = r.r_motion == 1.0;
         return num(r.r_motion);
       }},
      {"ballistic flight passes and needs no ground force",
       [](bool& ok) {
         const auto r = score_fixture(fixtures::ballistic());
         const auto& d = *r.diagnostics;
         double worst = 0.0;
         for (Eigen::Index t = 1; t + 1 < d.grf.rows(); ++t) {
           worst = std::max(worst, std::abs(d.grf(t, 2)));
         }
         ok = d.ballistic_ok && worst < 1.0;
         return num(worst) + " N";
       }},
      {"closed cube has no self-intersection",
       [](bool& ok) {
         const auto s = self_penetration_rate(fixtures::cube());
         ok = s.mean == 0.0;
         return num(s.mean) + "%";
       }},
      {"5 crossing pairs in 100 faces give spen 5",
       [](bool& ok) {
         const auto s = self_penetration_rate(fixtures::crossing_pairs());
         ok = s.mean == 5.0;
         return num(s.mean) + "%";
       }},
      {"spen 11 normalizes to 0.5",
       [](bool& ok) {
         const double v = spen_violation(11.0);
         ok = std::abs(v - 0.5) < 1e-12;
         return num(v);
       }},
      {"single Elo game gives 1516/1484",
       [](bool& ok) {
         const std::vector<eval::PairwiseVote> votes = {
             {"p", "p", "a", "b", eval::Question::kBalance, eval::Outcome::kA}};
         const auto t = eval::elo_ratings(votes);
         ok = t.rating.at("a") == 1516.0 && t.rating.at("b") == 1484.0;
         return num(t.rating.at("a")) + "/" + num(t.rating.at("b"));
       }},
      {"Spearman on a two-swap example is 0.8",
       [](bool& ok) {
         const std::vector<double> x = {1, 2, 3, 4, 5}, y = {1, 3, 2, 5, 4};
         const double rho = eval::spearman_rho(x, y);
         // 1 - 6 * sum(d^2) / (n (n^2 - 1)) with sum(d^2) = 4.
         ok = std::abs(rho - 0.8) < 1e-12;
         return num(rho);
       }},
      {"NFT scalar case: loss 0.01, gradient 0.02",
       [](bool& ok) {
         nft::PolicyTriple t;
         t.v_theta = Eigen::VectorXd::Constant(1, 1.0);
         t.v_theta_old = Eigen::VectorXd::Zero(1);
         t.v_target = Eigen::VectorXd::Zero(1);
         t.beta = 0.1;
         t.r_tilde = 1.0;
         const double loss = nft::policy_loss(t);
         const double grad = nft::loss_gradient(t)(0);
         ok = std::abs(loss - 0.01) < 1e-12 && std::abs(grad - 0.02) < 1e-12;
         return num(loss) + ", " + num(grad);
       }},
  };

  int failed = 0;
  for (const auto& check : checks) {
    bool ok = false;
    std::string value;
    try {
      value = check.run(ok);
    } catch (const std::exception& e) {
      value = std::string("threw: ") + e.what();
      ok = false;
    }
    if (!ok) ++failed;
    std::printf("%s  %s", ok ? "PASS" : "FAIL", check.name);
    if (verbose || !ok) std::printf("  [%s]", value.c_str());
    std::printf("\n");
  }
  std::printf("%zu checks, %d failed\n", checks.size(), failed);
  return failed == 0 ? kOk : kFailure;
}

}  // namespace motionfeas::cli
