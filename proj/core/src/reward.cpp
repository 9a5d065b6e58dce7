#include "motionfeas/reward.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "motionfeas/contact.h"
#include "motionfeas/dynamic.h"
#include "motionfeas/kinematic.h"

namespace motionfeas {

double score_field(const ScoreReport& r, std::string_view name) {
  if (name == "v_vel") return r.v_vel;
  if (name == "v_spen") return r.v_spen;
  if (name == "v_lim") return r.v_lim;
  if (name == "v_slip") return r.v_slip;
  if (name == "v_gpen") return r.v_gpen;
  if (name == "v_float") return r.v_float;
  if (name == "v_bal") return r.v_bal;
  if (name == "s_tau") return r.s_tau;
  if (name == "s_grf") return r.s_grf;
  if (name == "s_met") return r.s_met;
  if (name == "f_kin") return r.f_kin;
  if (name == "f_con") return r.f_con;
  if (name == "f_dyn") return r.f_dyn;
  if (name == "r_motion") return r.r_motion;
  throw std::invalid_argument("unknown score field '" + std::string(name) + "'");
}

double aggregate_reward(double f_kin, double f_con, double f_dyn, const RewardWeights& w) {
  using L = long double;
  if (w.is_equal()) return static_cast<double>((L(f_kin) + L(f_con) + L(f_dyn)) / 3.0L);
  const double total = w.kinematic + w.contact + w.dynamic;
  if (!(total > 0.0)) throw std::invalid_argument("reward weights must not all be zero");
  return (w.kinematic * f_kin + w.contact * f_con + w.dynamic * f_dyn) / total;
}

void finalize_report(ScoreReport& r, const RewardWeights& weights) {
  r.f_kin = kinematic_score(r.v_vel, r.v_spen, r.v_lim);
  r.f_con = contact_score(r.v_slip, r.v_gpen, r.v_float, r.v_bal);
  r.f_dyn = dynamic_score(r.s_tau, r.s_grf, r.s_met);
  r.r_motion = aggregate_reward(r.f_kin, r.f_con, r.f_dyn, weights);
}

ScoreReport score_trajectory(const MotionTrajectory& traj, const BodyModel& body,
                             const MeshSequence* mesh, const ScoringParams& params,
                             const ScoreOptions& options) {
  if (auto body_check = validate_body(body); !body_check) throw ValidationError(body_check);
  if (auto check = validate_trajectory(traj, body, mesh); !check) throw ValidationError(check);

  const auto kin = evaluate_kinematics(traj, body, mesh, params.spen);
  const auto con = evaluate_contact(traj, body, mesh, params.contact);
  const auto dyn = evaluate_dynamics(traj, body, params.dynamics);

  ScoreReport r;
  r.v_vel = kin.v_vel;
  r.v_spen = kin.v_spen;
  r.v_lim = kin.v_lim;
  r.v_slip = con.v_slip;
  r.v_gpen = con.v_gpen;
  r.v_float = con.v_float;
  r.v_bal = con.v_bal;
  r.s_tau = dyn.s_tau;
  r.s_grf = dyn.s_grf;
  r.s_met = dyn.s_met;
  finalize_report(r, params.weights);

  if (kin.spen_skipped) r.flags.emplace_back("spen-skipped");
  if (!con.timeline.from_mesh) r.flags.emplace_back("contact-from-skeleton");
  if (!con.floating.ballistic_ok()) r.flags.emplace_back("non-ballistic-airborne");

  if (options.with_diagnostics) {
    Diagnostics d;
    if (kin.spen) {
      d.spen_per_frame = kin.spen->per_frame;
      d.spen_mean = kin.spen->mean;
    }
    d.velocity_violation_rate =
        kin.per_joint_velocity_flags.cast<double>().rowwise().mean().matrix();
    d.limit_violation_rate = kin.per_joint_limit_flags.cast<double>().rowwise().mean().matrix();
    d.contact = con.timeline.contact;
    d.foot_height = con.timeline.foot_height;
    d.foot_speed = con.timeline.foot_speed;
    d.float_flags = con.floating.flags;
    d.balance_distance = con.balance.distance;
    d.com = dyn.com;
    d.grf = dyn.grf;
    d.max_torque = dyn.torque.rowwise().maxCoeff();
    d.raw_slip = con.raw_slip;
    d.raw_gpen = con.raw_gpen;
    d.met_total = dyn.met_total;
    d.ballistic_ok = con.floating.ballistic_ok();
    r.diagnostics = std::move(d);
  }
  return r;
}

std::vector<double> normalize_rewards(std::span<const double> rewards,
                                      std::span<const std::string> groups) {
  if (rewards.size() != groups.size()) {
    throw std::invalid_argument("normalize_rewards: one group label per reward required");
  }
  std::map<std::string_view, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(i);

  std::vector<double> out(rewards.size(), 0.5);
  for (const auto& [group, idx] : members) {
    if (idx.size() < 2) continue;
    const auto n = static_cast<double>(idx.size());
    // Shifted by the first member so equal rewards give an exact mean.
    const double pivot = rewards[idx.front()];
    double shift = 0.0;
    for (auto i : idx) shift += rewards[i] - pivot;
    const double mean = pivot + shift / n;
    double var = 0.0;
    for (auto i : idx) var += (rewards[i] - mean) * (rewards[i] - mean);
    const double std_dev = std::max(std::sqrt(var / n), kStdFloor);
    for (auto i : idx) {
      const double advantage =
          std::clamp((rewards[i] - mean) / std_dev, -kAdvantageClip, kAdvantageClip);
      out[i] = (advantage + kAdvantageClip) / (2.0 * kAdvantageClip);
    }
  }
  return out;
}

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json flags_json(const FlagMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string report_to_json(const ScoreReport& report, const Config* effective, int indent) {
  json j = json::object();
  for (auto name : kScoreFieldNames) j[std::string(name)] = score_field(report, name);
  j["flags"] = report.flags;
  if (effective != nullptr) {
    json cfg = json::object();
    for (const auto& [key, value] : effective->entries()) {
      std::visit([&](const auto& v) { cfg[key] = v; }, value);
    }
    j["config"] = std::move(cfg);
  }
  if (report.diagnostics) {
    const Diagnostics& d = *report.diagnostics;
    j["diagnostics"] = json{
        {"spen_per_frame", d.spen_per_frame},
        {"spen_mean", d.spen_mean},
        {"velocity_violation_rate", vector_json(d.velocity_violation_rate)},
        {"limit_violation_rate", vector_json(d.limit_violation_rate)},
        {"contact", flags_json(d.contact)},
        {"foot_height", matrix_json(d.foot_height)},
        {"foot_speed", matrix_json(d.foot_speed)},
        {"float_flags", flags_json(d.float_flags)},
        {"balance_distance", d.balance_distance},
        {"com", matrix_json(d.com)},
        {"grf", matrix_json(d.grf)},
        {"max_torque", vector_json(d.max_torque)},
        {"raw_slip", d.raw_slip},
        {"raw_gpen", d.raw_gpen},
        {"met_total", d.met_total},
        {"ballistic_ok", d.ballistic_ok},
    };
  }
  return j.dump(indent);
}

}  // namespace motionfeas
