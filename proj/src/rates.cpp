#include "dlsec/rates.hpp"

#include <algorithm>
#include <cmath>

namespace dlsec {

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

std::vector<double>
policy_outer_breaks (const PowerPolicy &policy)
{
  if (const auto *t = std::get_if<TruncatedMainInversion> (&policy.family ()))
    {
      return {t->h_min};
    }
  return {};
}

double
ratio_or_zero (double num, double den)
{
  return std::isinf (den) ? 0.0 : num / den;
}

// ess-inf of P(h) h_m
double
main_snr_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e)
{
  const auto sm = dist_m.support ();
  const auto se = dist_e.support ();
  return std::visit (overloaded{
                         [&] (const ConstantPower &p) { return p.power * sm.lo; },
                         [&] (const FullInversion &p) { return p.c * std::max (1.0, ratio_or_zero (sm.lo, se.hi)); },
                         [&] (const MainInversion &p) { return p.c; },
                         [&] (const TruncatedMainInversion &p) {
                           return has_mass_below (dist_m, p.h_min) ? 0.0 : p.c;
                         },
                     },
                     policy.family ());
}

// ess-inf of P(h) min(h_m, h_e)
double
min_snr_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e)
{
  const auto sm = dist_m.support ();
  const auto se = dist_e.support ();
  return std::visit (overloaded{
                         [&] (const ConstantPower &p) { return p.power * std::min (sm.lo, se.lo); },
                         [&] (const FullInversion &p) { return p.c; },
                         [&] (const MainInversion &p) { return p.c * std::min (1.0, ratio_or_zero (se.lo, sm.hi)); },
                         [&] (const TruncatedMainInversion &p) {
                           if (has_mass_below (dist_m, p.h_min))
                             {
                               return 0.0;
                             }
                           return p.c * std::min (1.0, ratio_or_zero (se.lo, sm.hi));
                         },
                     },
                     policy.family ());
}

} // namespace

RateBreakdown
per_state_rates (const PowerPolicy &policy, const ChannelState &state, const KeySplitFunction &q)
{
  const double qv = q (state);
  if (!(qv >= state.h_e))
    {
      throw std::domain_error ("key split q(h) must satisfy q(h) >= h_e");
    }
  const double p = policy.power (state);
  RateBreakdown r;
  r.r_main = std::log1p (p * state.h_m);
  r.r_eve = std::log1p (p * state.h_e);
  r.r_s = positive_part (r.r_main - r.r_eve);
  r.r_s_prime = positive_part (r.r_main - std::log1p (p * qv));
  r.r_s_dprime = qv == state.h_e ? 0.0 : std::max (0.0, r.r_s - r.r_s_prime);
  return r;
}

RateBreakdown
per_state_rates (const PowerPolicy &policy, const ChannelState &state, KeyShareRule q)
{
  return per_state_rates (policy, state, KeySplitFunction (q));
}

JointIntegrand
secrecy_integrand (const PowerPolicy &policy)
{
  JointIntegrand f;
  f.value = [policy] (const ChannelState &h) {
    const double p = policy.power (h);
    return positive_part (std::log1p (p * h.h_m) - std::log1p (p * h.h_e));
  };
  f.inner_breaks = [] (double hm, std::vector<double> &out) { out.push_back (hm); };
  f.outer_breaks = policy_outer_breaks (policy);
  return f;
}

JointIntegrand
key_rate_integrand (const PowerPolicy &policy, KeyShareRule q)
{
  JointIntegrand f;
  f.value = [policy, q] (const ChannelState &h) {
    const double p = policy.power (h);
    return positive_part (std::log1p (p * h.h_m) - std::log1p (p * q (h)));
  };
  f.inner_breaks = [q] (double hm, std::vector<double> &out) {
    out.push_back (hm);
    out.push_back (q.kappa);
  };
  f.outer_breaks = policy_outer_breaks (policy);
  if (q.kappa > 0.0)
    {
      f.outer_breaks.push_back (q.kappa);
    }
  return f;
}

JointIntegrand
residual_key_integrand (const PowerPolicy &policy, double data_rate)
{
  JointIntegrand f;
  f.value = [policy, data_rate] (const ChannelState &h) {
    const double p = policy.power (h);
    return positive_part (std::log1p (p * h.h_m) - data_rate - std::log1p (p * h.h_e));
  };
  const bool main_only = policy.main_only ();
  f.inner_breaks = [policy, data_rate, main_only] (double hm, std::vector<double> &out) {
    out.push_back (hm);
    if (!main_only)
      {
        return;
      }
    // r_eve = r_main - R  <=>  h_e = ((1 + P h_m) e^{-R} - 1) / P
    const double p = policy.power (ChannelState{hm, hm});
    if (p > 0.0)
      {
        out.push_back (std::expm1 (std::log1p (p * hm) - data_rate) / p);
      }
  };
  f.outer_breaks = policy_outer_breaks (policy);
  return f;
}

JointIntegrand
power_integrand (const PowerPolicy &policy)
{
  JointIntegrand f;
  f.value = [policy] (const ChannelState &h) { return policy.power (h); };
  f.inner_breaks = [] (double hm, std::vector<double> &out) { out.push_back (hm); };
  f.outer_breaks = policy_outer_breaks (policy);
  return f;
}

JointIntegrand
log_ratio_integrand ()
{
  JointIntegrand f;
  f.value = [] (const ChannelState &h) { return positive_part (std::log (h.h_m / h.h_e)); };
  f.inner_breaks = [] (double hm, std::vector<double> &out) { out.push_back (hm); };
  return f;
}

double
ergodic_secrecy_rate (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                      int nodes)
{
  if (policy.scale () == 0.0)
    {
      return 0.0;
    }
  return expect_joint (secrecy_integrand (policy), dist_m, dist_e, nodes);
}

double
expected_key_rate (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                   KeyShareRule q, int nodes)
{
  if (policy.scale () == 0.0)
    {
      return 0.0;
    }
  return expect_joint (key_rate_integrand (policy, q), dist_m, dist_e, nodes);
}

double
residual_key_rate (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                   double data_rate, int nodes)
{
  if (policy.scale () == 0.0)
    {
      return 0.0;
    }
  return expect_joint (residual_key_integrand (policy, data_rate), dist_m, dist_e, nodes);
}

double
delay_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e)
{
  return std::log1p (main_snr_floor (policy, dist_m, dist_e));
}

double
otp_rate_cap (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e)
{
  return std::log1p (min_snr_floor (policy, dist_m, dist_e));
}

double
dprime_floor (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
              KeyShareRule q)
{
  // A continuous h_m puts mass on h_m < h_e (r_s = 0); a continuous h_e puts
  // mass on h_e >= kappa (q = h_e). Either way the infimum is 0.
  if (!dist_m.is_degenerate () || !dist_e.is_degenerate ())
    {
      return 0.0;
    }
  const ChannelState h{dist_m.point_value (), dist_e.point_value ()};
  return per_state_rates (policy, h, q).r_s_dprime;
}

} // namespace dlsec
