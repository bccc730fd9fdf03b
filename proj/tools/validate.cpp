#include "cli.hpp"

#include "dlsec/bounds.hpp"

#include <cmath>

namespace dlsec::cli {

namespace {

struct Case
{
  std::string label;
  FadingDistribution dist_m;
  FadingDistribution dist_e;
  FamilySpec family;
  CsiMode csi;
};

CheckResult
compare (const std::string &name, double quad, const Estimate &mc, const ValidateOptions &opts)
{
  CheckResult r;
  r.name = name;
  r.quadrature = quad;
  r.monte_carlo = mc.mean;
  r.std_error = mc.std_error;
  r.tolerance = opts.sigma * mc.std_error + opts.abs_tol;
  r.pass = std::abs (quad - mc.mean) <= r.tolerance;
  return r;
}

} // namespace

std::vector<CheckResult>
run_validation (const ValidateOptions &opts)
{
  const auto base = FadingDistribution::parse (opts.dist);
  const auto gamma = FadingDistribution::parse ("gamma:3:0.5");
  const auto expo = FadingDistribution::parse ("exp:1");
  const std::size_t samples = opts.quick ? 100'000 : 1'000'000;
  const double p_bar = 100.0;

  std::vector<Case> cases = {
      {"const", base, base, {FamilyKind::Constant, 0.0}, CsiMode::Full},
      {"full-inv", base, base, {FamilyKind::FullInversion, 0.0}, CsiMode::Full},
      {"main-inv", base, base, {FamilyKind::MainInversion, 0.0}, CsiMode::Main},
      {"full-inv/gamma", base, gamma, {FamilyKind::FullInversion, 0.0}, CsiMode::Full},
      {"trunc-inv:0.5/exp", base, expo, {FamilyKind::TruncatedMainInversion, 0.5}, CsiMode::Main},
  };
  if (opts.quick)
    {
      cases.erase (cases.begin () + 3, cases.end ());
    }

  std::vector<CheckResult> results;
  std::uint64_t stream = 0;
  const auto mc = [&] (const JointIntegrand &f, const Case &c) {
    return mc_expect (f.value, c.dist_m, c.dist_e, samples, RngSeed{opts.seed, stream++});
  };

  for (const auto &c : cases)
    {
      const auto policy = calibrate (c.family, c.dist_m, c.dist_e, p_bar, c.csi);
      const std::string tag = c.label + " " + c.dist_m.to_string () + "/" + c.dist_e.to_string ();
      results.push_back (compare ("E[P] " + tag, p_bar, mc (power_integrand (policy), c), opts));
      results.push_back (compare ("E[R_s] " + tag, ergodic_secrecy_rate (policy, c.dist_m, c.dist_e),
                                  mc (secrecy_integrand (policy), c), opts));
      const KeyShareRule q{0.5 * c.dist_e.mean ()};
      results.push_back (compare ("E[R_s'] kappa=" + std::to_string (q.kappa) + " " + tag,
                                  expected_key_rate (policy, c.dist_m, c.dist_e, q),
                                  mc (key_rate_integrand (policy, q), c), opts));
      if (policy.main_only ())
        {
          const double r = 0.25 * delay_floor (policy, c.dist_m, c.dist_e);
          results.push_back (compare ("K(R_d/4) " + tag, residual_key_rate (policy, c.dist_m, c.dist_e, r),
                                      mc (residual_key_integrand (policy, r), c), opts));
        }
    }

  {
    const Case c{"log-ratio", base, base, {}, CsiMode::Full};
    results.push_back (
        compare ("E[log(h_m/h_e)^+] " + base.to_string (), high_snr_limit (base, base).value, mc (log_ratio_integrand (), c), opts));
  }

  // fixed point: bisection vs brute-force scan of f(R) on [0, R_d]
  {
    const auto policy = calibrate ({FamilyKind::MainInversion, 0.0}, base, base, p_bar, CsiMode::Main);
    const int nodes = 48;
    const KeyBalance balance (policy, base, base, nodes);
    const double floor = balance.delay_floor ();
    const int grid = opts.quick ? 1000 : 10'000;
    const double step = floor / grid;
    double scan_root = floor;
    double prev = -std::numeric_limits<double>::infinity ();
    bool increasing = true;
    bool found = false;
    for (int i = 0; i <= grid; ++i)
      {
        const double r = i * step;
        const double f = balance.residual (r);
        increasing = increasing && f > prev;
        prev = f;
        if (!found && f >= 0.0)
          {
            scan_root = r;
            found = true;
          }
      }
    const double solved = balance.solve ().rate;
    CheckResult r;
    r.name = "key-balance fixed point vs " + std::to_string (grid) + "-point scan " + base.to_string ();
    r.quadrature = solved;
    r.monte_carlo = scan_root;
    r.std_error = 0.0;
    r.tolerance = step;
    r.pass = increasing && std::abs (solved - scan_root) <= step;
    results.push_back (r);
  }
  return results;
}

} // namespace dlsec::cli
