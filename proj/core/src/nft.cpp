#include "motionfeas/nft.h"

#include <stdexcept>

namespace motionfeas::nft {

void check(const PolicyTriple& t) {
  if (!(t.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(t.r_tilde >= 0.0 && t.r_tilde <= 1.0)) {
    throw std::invalid_argument("r_tilde must lie in [0, 1]");
  }
  if (t.v_theta.size() != t.v_theta_old.size() || t.v_theta.size() != t.v_target.size()) {
    throw std::invalid_argument("policy vectors must share one dimension");
  }
}

ImplicitPolicies interpolate_policies(const PolicyTriple& t) {
  check(t);
  return {(1.0 - t.beta) * t.v_theta_old + t.beta * t.v_theta,
          (1.0 + t.beta) * t.v_theta_old - t.beta * t.v_theta};
}

double policy_loss(const PolicyTriple& t) {
  const auto p = interpolate_policies(t);
  return t.r_tilde * (p.v_plus - t.v_target).squaredNorm() +
         (1.0 - t.r_tilde) * (p.v_minus - t.v_target).squaredNorm();
}

Eigen::VectorXd loss_gradient(const PolicyTriple& t) {
  const auto p = interpolate_policies(t);
  return 2.0 * t.beta *
         (t.r_tilde * (p.v_plus - t.v_target) - (1.0 - t.r_tilde) * (p.v_minus - t.v_target));
}

}  // namespace motionfeas::nft
