#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motionfeas/body_model.h"
#include "motionfeas/config.h"
#include "motionfeas/motion.h"

namespace motionfeas {

// Per-frame traces behind a report, filled on request.
struct Diagnostics {
  std::vector<double> spen_per_frame;         // percent, empty without a mesh
  Eigen::VectorXd velocity_violation_rate;    // T-1, fraction of joints over omega_max
  Eigen::VectorXd limit_violation_rate;       // T, fraction of DoF out of range
  FlagMatrix contact;                         // T x 2
  Eigen::MatrixXd foot_height;                // T x 2
  Eigen::MatrixXd foot_speed;                 // T x 2
  FlagMatrix float_flags;                     // T x 2
  std::vector<double> balance_distance;       // T
  Eigen::MatrixXd com;                        // T x 3
  Eigen::MatrixXd grf;                        // T x 3
  Eigen::VectorXd max_torque;                 // T, max over joints
  double raw_slip = 0.0;                      // m
  double raw_gpen = 0.0;                      // m
  double spen_mean = 0.0;                     // percent
  double met_total = 0.0;
  bool ballistic_ok = true;
};

struct ScoreReport {
  double v_vel = 0.0;
  double v_spen = 0.0;
  double v_lim = 0.0;
  double v_slip = 0.0;
  double v_gpen = 0.0;
  double v_float = 0.0;
  double v_bal = 0.0;
  double s_tau = 1.0;
  double s_grf = 1.0;
  double s_met = 1.0;
  double f_kin = 1.0;
  double f_con = 1.0;
  double f_dyn = 1.0;
  double r_motion = 1.0;

  // Partial-input notes such as "spen-skipped".
  std::vector<std::string> flags;
  std::optional<Diagnostics> diagnostics;
};

// The ten violation/sub-score terms, in report order.
inline constexpr std::array<std::string_view, 10> kTermNames = {
    "v_vel", "v_spen", "v_lim", "v_slip", "v_gpen", "v_float", "v_bal", "s_tau", "s_grf", "s_met"};
// All fourteen numeric report fields.
inline constexpr std::array<std::string_view, 14> kScoreFieldNames = {
    "v_vel", "v_spen", "v_lim",  "v_slip", "v_gpen", "v_float", "v_bal",
    "s_tau", "s_grf",  "s_met",  "f_kin",  "f_con",  "f_dyn",   "r_motion"};

double score_field(const ScoreReport& report, std::string_view name);

// Weighted mean of the three axes. Equal weights reduce to the plain
// average (f_kin + f_con + f_dyn) / 3.
double aggregate_reward(double f_kin, double f_con, double f_dyn,
                        const RewardWeights& weights = {});

// Fills the axis scores and r_motion from the ten terms already set on
// `report`.
void finalize_report(ScoreReport& report, const RewardWeights& weights = {});

struct ScoreOptions {
  bool with_diagnostics = false;
};

// Validates the inputs (throwing ValidationError) and runs all three
// feasibility evaluations.
ScoreReport score_trajectory(const MotionTrajectory& traj, const BodyModel& body,
                             const MeshSequence* mesh, const ScoringParams& params = {},
                             const ScoreOptions& options = {});

// Per-group z-score, clipped to [-5, 5] and mapped affinely onto [0, 1].
// Groups with one sample map to 0.5.
std::vector<double> normalize_rewards(std::span<const double> rewards,
                                      std::span<const std::string> groups);

inline constexpr double kAdvantageClip = 5.0;
inline constexpr double kStdFloor = 1e-8;

// Single JSON object with every score field, flags, and optionally the
// effective configuration and per-frame diagnostics.
std::string report_to_json(const ScoreReport& report, const Config* effective = nullptr,
                           int indent = 2);

}  // namespace motionfeas
