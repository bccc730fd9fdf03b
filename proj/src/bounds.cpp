#include "dlsec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dlsec {

namespace {

constexpr double kCertificateTol = 1e-9;

using PolicyEvaluator = BoundResult (*) (const PowerPolicy &, const FadingDistribution &,
                                         const FadingDistribution &, const BoundOptions &);

BoundResult
zero_result (const PowerPolicy &policy, double floor)
{
  BoundResult r;
  r.policy = policy;
  r.value = 0.0;
  r.binding = "delay";
  r.diagnostics["r_d_floor"] = floor;
  return r;
}

std::pair<double, double>
cutoff_search_range (const FadingDistribution &dist_m)
{
  if (dist_m.is_degenerate ())
    {
      const double v = dist_m.point_value ();
      return {std::log (v * 1e-3), std::log (v)};
    }
  const double mean = dist_m.mean ();
  return {std::log (mean * 1e-4), std::log (mean * 2.0)};
}

BoundResult
evaluate_family (const FamilySpec &family, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                 double p_bar, CsiMode csi, PolicyEvaluator evaluator, const BoundOptions &opts)
{
  if (family.kind != FamilyKind::TruncatedMainInversion || family.h_min > 0.0)
    {
      return evaluator (calibrate (family, dist_m, dist_e, p_bar, csi, opts.nodes), dist_m, dist_e, opts);
    }

  // free cutoff: search log(h_min)
  const auto at = [&] (double log_cutoff) {
    const FamilySpec f{FamilyKind::TruncatedMainInversion, std::exp (log_cutoff)};
    try
      {
        return evaluator (calibrate (f, dist_m, dist_e, p_bar, csi, opts.nodes), dist_m, dist_e, opts);
      }
    catch (const NonInvertibleChannel &)
      {
        BoundResult r;
        r.value = -1.0;
        return r;
      }
  };
  const auto [lo, hi] = cutoff_search_range (dist_m);
  const auto best = golden_max ([&] (double x) { return at (x).value; }, lo, hi, opts.search_tol);
  double arg = best.argmax;
  double val = best.value;
  for (double x : {lo, hi})
    {
      const double v = at (x).value;
      if (v > val)
        {
          val = v;
          arg = x;
        }
    }
  auto result = at (arg);
  if (result.value < 0.0)
    {
      throw NonInvertibleChannel ("truncated inversion: no feasible cutoff");
    }
  result.diagnostics["h_min"] = std::exp (arg);
  return result;
}

BoundResult
search_menu (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
             const std::vector<FamilySpec> &menu, CsiMode csi, PolicyEvaluator evaluator, const BoundOptions &opts)
{
  if (!(p_bar >= 0.0) || !std::isfinite (p_bar))
    {
      throw std::invalid_argument ("average power must be finite and >= 0");
    }
  std::vector<std::string> warnings;
  std::optional<BoundResult> best;
  for (const auto &family : menu)
    {
      if (csi == CsiMode::Main && !family.main_only ())
        {
          warnings.push_back ("skipped " + family.to_string () + ": needs full CSI");
          continue;
        }
      try
        {
          auto r = evaluate_family (family, dist_m, dist_e, p_bar, csi, evaluator, opts);
          if (!best || r.value > best->value)
            {
              best = std::move (r);
            }
        }
      catch (const NonInvertibleChannel &e)
        {
          warnings.emplace_back (e.what ());
        }
    }
  if (!best)
    {
      warnings.emplace_back ("no feasible policy in the menu; reporting constant power");
      best = evaluator (calibrate (FamilySpec{FamilyKind::Constant, 0.0}, dist_m, dist_e, p_bar, csi, opts.nodes),
                        dist_m, dist_e, opts);
    }
  best->warnings.insert (best->warnings.end (), warnings.begin (), warnings.end ());
  return *best;
}

struct KeySplitValue
{
  double value;
  double key_rate;
  double dprime;
  double r_o;
};

KeySplitValue
lower_full_objective (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                      double cap, KeyShareRule q, int nodes)
{
  KeySplitValue v;
  v.key_rate = expected_key_rate (policy, dist_m, dist_e, q, nodes);
  v.dprime = dprime_floor (policy, dist_m, dist_e, q);
  v.r_o = std::min (v.key_rate, cap);
  v.value = v.dprime + v.r_o;
  return v;
}

} // namespace

double
db_to_linear (double db)
{
  if (std::isinf (db) && db < 0.0)
    {
      return 0.0;
    }
  return std::pow (10.0, db / 10.0);
}

double
linear_to_db (double linear)
{
  return linear > 0.0 ? 10.0 * std::log10 (linear) : -std::numeric_limits<double>::infinity ();
}

BoundResult
upper_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                  const BoundOptions &opts)
{
  BoundResult r;
  r.policy = policy;
  const double floor = delay_floor (policy, dist_m, dist_e);
  const double ergodic = ergodic_secrecy_rate (policy, dist_m, dist_e, opts.nodes);
  r.value = std::max (0.0, std::min (ergodic, floor));
  r.binding = ergodic <= floor ? "ergodic" : "delay";
  r.diagnostics["r_s_expected"] = ergodic;
  r.diagnostics["r_d_floor"] = floor;
  r.diagnostics["scale"] = policy.scale ();
  return r;
}

BoundResult
lower_full_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                       const BoundOptions &opts)
{
  const double floor = delay_floor (policy, dist_m, dist_e);
  if (floor == 0.0)
    {
      // dprime_floor + otp cap <= R_d pointwise
      auto r = zero_result (policy, floor);
      r.diagnostics["r_o_chosen"] = 0.0;
      r.diagnostics["kappa"] = opts.kappa.value_or (0.0);
      return r;
    }
  const double cap = otp_rate_cap (policy, dist_m, dist_e);

  double kappa = opts.kappa.value_or (0.0);
  if (!opts.kappa && dist_m.is_degenerate () && dist_e.is_degenerate ())
    {
      // Only point-mass pairs can have a positive dprime floor; otherwise the
      // key rate is non-increasing in kappa and kappa = 0 is optimal.
      const double hi = 2.0 * std::max (dist_m.point_value (), dist_e.point_value ());
      const auto obj = [&] (double k) {
        return lower_full_objective (policy, dist_m, dist_e, cap, KeyShareRule{k}, opts.nodes).value;
      };
      const auto best = golden_max (obj, 0.0, hi, opts.search_tol * hi);
      kappa = best.argmax;
      double val = best.value;
      for (double k : {0.0, hi})
        {
          const double v = obj (k);
          if (v > val)
            {
              val = v;
              kappa = k;
            }
        }
    }

  const auto v = lower_full_objective (policy, dist_m, dist_e, cap, KeyShareRule{kappa}, opts.nodes);
  BoundResult r;
  r.policy = policy;
  r.value = v.value;
  r.binding = v.key_rate <= cap ? "key" : "delay";
  r.diagnostics["r_s_expected"] = ergodic_secrecy_rate (policy, dist_m, dist_e, opts.nodes);
  r.diagnostics["r_s_prime_expected"] = v.key_rate;
  r.diagnostics["r_s_dprime_floor"] = v.dprime;
  r.diagnostics["r_d_floor"] = floor;
  r.diagnostics["otp_rate_cap"] = cap;
  r.diagnostics["r_o_chosen"] = v.r_o;
  r.diagnostics["kappa"] = kappa;
  r.diagnostics["scale"] = policy.scale ();
  // constant R_o: E[R_o] <= E[R_s'] and R_o <= min(r_main, r_eve) everywhere
  r.certified = v.r_o <= v.key_rate + kCertificateTol && v.r_o <= cap + kCertificateTol;
  return r;
}

KeyBalance::KeyBalance (PowerPolicy policy, FadingDistribution dist_m, FadingDistribution dist_e, int nodes)
    : m_policy (std::move (policy)), m_dist_m (std::move (dist_m)), m_dist_e (std::move (dist_e)), m_nodes (nodes)
{
  m_floor = dlsec::delay_floor (m_policy, m_dist_m, m_dist_e);
}

double
KeyBalance::key_rate (double data_rate) const
{
  return residual_key_rate (m_policy, m_dist_m, m_dist_e, data_rate, m_nodes);
}

double
KeyBalance::residual (double data_rate) const
{
  return data_rate - std::min (key_rate (data_rate), m_floor);
}

KeyBalance::Solution
KeyBalance::solve (double tol) const
{
  if (m_floor == 0.0)
    {
      return {0.0, 0};
    }
  int evaluations = 0;
  const auto f = [&] (double r) {
    ++evaluations;
    return residual (r);
  };
  const double root = bisect (f, 0.0, m_floor, tol);
  // step to the lower bracket edge so the key constraint holds, not just nearly
  const double rate = std::max (0.0, root - tol);
  return {rate, evaluations};
}

BoundResult
lower_main_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                       const BoundOptions &opts)
{
  const KeyBalance balance (policy, dist_m, dist_e, opts.nodes);
  const double floor = balance.delay_floor ();
  if (floor == 0.0)
    {
      auto r = zero_result (policy, floor);
      r.diagnostics["fixed_point_iterations"] = 0.0;
      return r;
    }
  const auto sol = balance.solve (opts.fixed_point_tol);
  BoundResult r;
  r.policy = policy;
  r.value = sol.rate;
  const double key = balance.key_rate (sol.rate);
  r.binding = key < floor ? "key" : "delay";
  r.diagnostics["r_d_floor"] = floor;
  r.diagnostics["r_s_expected"] = ergodic_secrecy_rate (policy, dist_m, dist_e, opts.nodes);
  r.diagnostics["key_rate_at_solution"] = key;
  r.diagnostics["fixed_point_iterations"] = sol.evaluations;
  r.diagnostics["scale"] = policy.scale ();
  r.certified = sol.rate <= std::min (key, floor) + kCertificateTol;
  return r;
}

BoundResult
upper_full (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
            const std::vector<FamilySpec> &menu, const BoundOptions &opts)
{
  return search_menu (dist_m, dist_e, p_bar, menu, CsiMode::Full, &upper_for_policy, opts);
}

BoundResult
lower_full (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
            const std::vector<FamilySpec> &menu, const BoundOptions &opts)
{
  return search_menu (dist_m, dist_e, p_bar, menu, CsiMode::Full, &lower_full_for_policy, opts);
}

BoundResult
upper_main (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
            const std::vector<FamilySpec> &menu, const BoundOptions &opts)
{
  return search_menu (dist_m, dist_e, p_bar, menu, CsiMode::Main, &upper_for_policy, opts);
}

BoundResult
lower_main (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
            const std::vector<FamilySpec> &menu, const BoundOptions &opts)
{
  return search_menu (dist_m, dist_e, p_bar, menu, CsiMode::Main, &lower_main_for_policy, opts);
}

HighSnrLimit
high_snr_limit (const FadingDistribution &dist_m, const FadingDistribution &dist_e, int nodes)
{
  HighSnrLimit out;
  out.value = expect_joint (log_ratio_integrand (), dist_m, dist_e, nodes);
  out.inverse_min_moment = inverse_min_moment (dist_m, dist_e, nodes);
  out.invertible = out.inverse_min_moment.has_value ();
  return out;
}

BoundSet
compute_bounds (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                const std::vector<FamilySpec> &menu, const BoundOptions &opts)
{
  BoundSet set;
  set.p_bar = p_bar;
  set.upper_full = upper_full (dist_m, dist_e, p_bar, menu, opts);
  set.lower_full = lower_full (dist_m, dist_e, p_bar, menu, opts);
  set.upper_main = upper_main (dist_m, dist_e, p_bar, menu, opts);
  set.lower_main = lower_main (dist_m, dist_e, p_bar, menu, opts);
  set.limit = high_snr_limit (dist_m, dist_e, opts.nodes);
  return set;
}

} // namespace dlsec
