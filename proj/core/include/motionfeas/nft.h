#pragma once

#include <Eigen/Core>

namespace motionfeas::nft {

// One sample of the forward-process policy objective over plain velocity
// vectors.
struct PolicyTriple {
  Eigen::VectorXd v_theta;      // current predictor
  Eigen::VectorXd v_theta_old;  // frozen predictor
  Eigen::VectorXd v_target;     // forward-process target velocity
  double beta = 0.1;            // interpolation strength, > 0
  double r_tilde = 0.5;         // normalized reward in [0, 1]
};

struct ImplicitPolicies {
  Eigen::VectorXd v_plus;
  Eigen::VectorXd v_minus;
};

// Throws std::invalid_argument when beta <= 0, r_tilde is outside [0, 1] or
// the vector sizes differ.
void check(const PolicyTriple& t);

// v+ = (1 - beta) v_old + beta v_theta,  v- = (1 + beta) v_old - beta v_theta.
ImplicitPolicies interpolate_policies(const PolicyTriple& t);

// r ||v+ - v_target||^2 + (1 - r) ||v- - v_target||^2.
double policy_loss(const PolicyTriple& t);

// d loss / d v_theta = 2 beta [r (v+ - v_target) - (1 - r)(v- - v_target)].
Eigen::VectorXd loss_gradient(const PolicyTriple& t);

}  // namespace motionfeas::nft
