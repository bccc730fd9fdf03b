#pragma once

// Per-state and expected rate functionals, all in nats per channel use.

#include "dlsec/expectation.hpp"
#include "dlsec/policy.hpp"

#include <functional>

namespace dlsec {

struct RateBreakdown
{
  double r_s = 0.0;        ///< [r_main - r_eve]^+
  double r_s_prime = 0.0;  ///< key share
  double r_s_dprime = 0.0; ///< wiretap-coded data share, r_s - r_s_prime
  double r_o = 0.0;        ///< one-time-pad data rate, set by the scheme
  double r_main = 0.0;     ///< log(1 + P h_m)
  double r_eve = 0.0;      ///< log(1 + P h_e)
};

/// q(h) = max(h_e, kappa). kappa = 0 gives q = h_e (all secrecy goes to key).
struct KeyShareRule
{
  double kappa = 0.0;

  double operator() (const ChannelState &h) const { return h.h_e > kappa ? h.h_e : kappa; }
};

using KeySplitFunction = std::function<double (const ChannelState &)>;

/// Throws std::domain_error when q(state) < h_e.
RateBreakdown per_state_rates (const PowerPolicy &policy, const ChannelState &state, const KeySplitFunction &q);
RateBreakdown per_state_rates (const PowerPolicy &policy, const ChannelState &state, KeyShareRule q = {});

/// Integrands with their kink locations, shared by quadrature and MC checks.
JointIntegrand secrecy_integrand (const PowerPolicy &policy);
JointIntegrand key_rate_integrand (const PowerPolicy &policy, KeyShareRule q);
/// (r_main - R - r_eve)^+, the key rate left over after a data rate R.
JointIntegrand residual_key_integrand (const PowerPolicy &policy, double data_rate);
JointIntegrand power_integrand (const PowerPolicy &policy);
/// [log(h_m / h_e)]^+
JointIntegrand log_ratio_integrand ();

/// E[r_s]
double ergodic_secrecy_rate (const PowerPolicy &policy, const FadingDistribution &dist_m,
                             const FadingDistribution &dist_e, int nodes = kDefaultNodes);

/// E[r_s_prime]
double expected_key_rate (const PowerPolicy &policy, const FadingDistribution &dist_m,
                          const FadingDistribution &dist_e, KeyShareRule q, int nodes = kDefaultNodes);

/// K(R) = E[(r_main - R - r_eve)^+]
double residual_key_rate (const PowerPolicy &policy, const FadingDistribution &dist_m,
                          const FadingDistribution &dist_e, double data_rate, int nodes = kDefaultNodes);

/// Essential infimum of r_main over the support, derived per family.
double delay_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e);

/// Essential infimum of min(r_main, r_eve), the cap on a constant OTP rate.
double otp_rate_cap (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e);

/// Essential infimum of r_s_dprime. Non-zero only when both gains are point masses.
double dprime_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                     KeyShareRule q);

inline double
positive_part (double x)
{
  return x > 0.0 ? x : 0.0;
}

} // namespace dlsec
