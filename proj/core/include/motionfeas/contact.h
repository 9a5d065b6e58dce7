#pragma once

#include <vector>

#include "motionfeas/body_model.h"
#include "motionfeas/config.h"
#include "motionfeas/geometry.h"
#include "motionfeas/motion.h"

namespace motionfeas {

inline constexpr int kLeftFoot = 0;
inline constexpr int kRightFoot = 1;

// Per-frame, per-foot contact state. Columns are {left, right}.
struct ContactTimeline {
  FlagMatrix contact;            // T x 2
  Eigen::MatrixXd foot_height;   // T x 2, lowest sole point z
  Eigen::MatrixXd foot_speed;    // T x 2, |d/dt mean sole position|
  std::array<Eigen::MatrixXd, 2> foot_position;  // T x 3 per foot
  bool from_mesh = false;

  std::size_t num_frames() const { return static_cast<std::size_t>(contact.rows()); }
};

// Uses the body's sole vertex sets when a mesh is given and the sets are
// non-empty, otherwise the ankle/toe joints. A foot is in contact iff it is
// below height_max and slower than vel_max.
ContactTimeline detect_contacts(const MotionTrajectory& traj, const BodyModel& body,
                                const MeshSequence* mesh, const ContactParams& params = {});

struct NormalizedTerm {
  double raw = 0.0;
  double value = 0.0;  // clip(raw / norm, 0, 1)
};

// raw = (1/2T) sum c * |p_dot| * dt, meters.
NormalizedTerm slip_violation(const ContactTimeline& timeline, double frame_rate_hz,
                              const ContactParams& params = {});

// raw = mean over foot-frames of max(0, -h), meters.
NormalizedTerm penetration_violation(const ContactTimeline& timeline,
                                     const ContactParams& params = {});

struct AirborneRun {
  std::size_t first = 0;
  std::size_t length = 0;
  double rms = 0.0;  // residual of the fixed-curvature parabola fit
  bool ballistic = true;
};

struct FloatViolation {
  double v_float = 0.0;
  Eigen::MatrixXd ratio;   // T x 2 foot-root speed ratio
  FlagMatrix ratio_flags;  // T x 2, from the ratio bounds
  FlagMatrix forced;       // T x 2, from failed ballistic runs
  FlagMatrix flags;        // ratio_flags | forced
  std::vector<AirborneRun> runs;

  bool ballistic_ok() const;
};

// Fits z_root(t) = a + b t - g t^2 / 2 over each run of frames with no foot
// in contact and returns the RMS residual.
double ballistic_fit_rms(std::span<const double> root_z, double frame_rate_hz, double gravity);

FloatViolation float_violation(const MotionTrajectory& traj, const ContactTimeline& timeline,
                               const BodyModel& body, const ContactParams& params = {});

struct BalanceViolation {
  double v_bal = 0.0;
  std::vector<double> distance;  // d_t, meters
  Eigen::MatrixXd com_xy;        // T x 2
};

BalanceViolation balance_violation(const MotionTrajectory& traj, const ContactTimeline& timeline,
                                   const BodyModel& body, const ContactParams& params = {});

// 1 - (v_slip + v_gpen + v_float + v_bal) / 4. Throws std::domain_error
// outside [0, 1].
double contact_score(double v_slip, double v_gpen, double v_float, double v_bal);

struct ContactViolations {
  double v_slip = 0.0;
  double v_gpen = 0.0;
  double v_float = 0.0;
  double v_bal = 0.0;
  double f_con = 1.0;
  double raw_slip = 0.0;
  double raw_gpen = 0.0;
  ContactTimeline timeline;
  FloatViolation floating;
  BalanceViolation balance;
};

ContactViolations evaluate_contact(const MotionTrajectory& traj, const BodyModel& body,
                                   const MeshSequence* mesh, const ContactParams& params = {});

}  // namespace motionfeas
