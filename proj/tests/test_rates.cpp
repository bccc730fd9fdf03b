#include "dlsec/rates.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dlsec;

TEST_CASE ("per-state rates")
{
  const PowerPolicy unit (ConstantPower{1.0}, CsiMode::Full);
  auto r = per_state_rates (unit, {3.0, 1.0}, KeyShareRule{0.0});
  CHECK (r.r_s == doctest::Approx (std::log (2.0)));
  CHECK (r.r_s_prime == doctest::Approx (std::log (2.0)));
  CHECK (r.r_s_dprime == 0.0);

  CHECK (per_state_rates (unit, {1.0, 1.0}, KeyShareRule{0.3}).r_s == 0.0);
  CHECK (per_state_rates (unit, {1.0, 1.0}, KeyShareRule{3.0}).r_s == 0.0);

  r = per_state_rates (unit, {1.0, 3.0});
  CHECK (r.r_s == 0.0);
  CHECK (r.r_s_prime == 0.0);

  // kappa above h_e moves part of r_s to the wiretap-coded share
  r = per_state_rates (unit, {3.0, 1.0}, KeyShareRule{2.0});
  CHECK (r.r_s_prime == doctest::Approx (std::log (4.0 / 3.0)));
  CHECK (r.r_s_dprime == doctest::Approx (std::log (3.0 / 2.0)));
  CHECK (r.r_s_prime + r.r_s_dprime == doctest::Approx (r.r_s));

  CHECK_THROWS_AS (per_state_rates (unit, {3.0, 1.0}, [] (const ChannelState &) { return 0.5; }), std::domain_error);
}

TEST_CASE ("rates are non-negative and split exactly")
{
  std::mt19937_64 eng (5);
  std::gamma_distribution<double> g (2.0, 2.0);
  const PowerPolicy p (FullInversion{30.0}, CsiMode::Full);
  for (int i = 0; i < 20000; ++i)
    {
      const ChannelState h{g (eng), g (eng)};
      for (double kappa : {0.0, 1.0, 4.0})
        {
          const auto r = per_state_rates (p, h, KeyShareRule{kappa});
          CHECK (r.r_s >= 0.0);
          CHECK (r.r_s_prime >= 0.0);
          CHECK (r.r_s_dprime >= 0.0);
          CHECK (r.r_main >= 0.0);
          CHECK (r.r_eve >= 0.0);
          if (h.h_e >= kappa)
            {
              CHECK (r.r_s_dprime == 0.0);
            }
        }
      // both received SNRs are at least c, with equality on the smaller gain
      const auto r = per_state_rates (p, h);
      CHECK (r.r_main >= std::log1p (30.0) - 1e-12);
      CHECK (r.r_eve >= std::log1p (30.0) - 1e-12);
      CHECK (std::min (r.r_main, r.r_eve) == doctest::Approx (std::log1p (30.0)).epsilon (1e-14));
      // [a-b]^+ - [b-a]^+ = a-b
      const double a = r.r_main, b = r.r_eve;
      CHECK (positive_part (a - b) - positive_part (b - a) == doctest::Approx (a - b).epsilon (1e-14));
    }
}

TEST_CASE ("ergodic secrecy rate")
{
  const FadingDistribution two (Degenerate{2.0});
  CHECK (ergodic_secrecy_rate (PowerPolicy (ConstantPower{7.0}, CsiMode::Full), two, two) == 0.0);
  CHECK (ergodic_secrecy_rate (PowerPolicy (ConstantPower{1.0}, CsiMode::Full), FadingDistribution (Degenerate{1.0}),
                               FadingDistribution (Degenerate{1e-12}))
         == doctest::Approx (std::log (2.0)).epsilon (1e-10));

  const FadingDistribution chi (ChiSquare{4});
  const auto p = calibrate ({FamilyKind::FullInversion, 0.0}, chi, chi, 100.0, CsiMode::Full);
  const double c = p.scale ();
  const auto mc = oracle::gamma_pair_mc (
      [c] (double a, double b) {
        const double pw = c / std::min (a, b);
        return std::max (0.0, std::log1p (pw * a) - std::log1p (pw * b));
      },
      2, 2, 2, 2, 1'000'000, 8);
  CHECK (std::abs (ergodic_secrecy_rate (p, chi, chi) - mc.mean) < 4.0 * mc.stderr_);
}

TEST_CASE ("expected key and residual key rates against Monte Carlo")
{
  const FadingDistribution chi (ChiSquare{4});
  const FadingDistribution g (GammaLaw{3.0, 0.5});
  const auto p = calibrate ({FamilyKind::MainInversion, 0.0}, chi, g, 100.0, CsiMode::Main);
  const double c = p.scale ();

  const double kappa = 1.2;
  const auto key = oracle::gamma_pair_mc (
      [&] (double a, double b) {
        const double pw = c / a;
        return std::max (0.0, std::log1p (pw * a) - std::log1p (pw * std::max (b, kappa)));
      },
      2, 2, 3, 0.5, 1'000'000, 9);
  CHECK (std::abs (expected_key_rate (p, chi, g, KeyShareRule{kappa}) - key.mean) < 4.0 * key.stderr_);

  const double rate = 1.5;
  const auto resid = oracle::gamma_pair_mc (
      [&] (double a, double b) {
        const double pw = c / a;
        return std::max (0.0, std::log1p (pw * a) - rate - std::log1p (pw * b));
      },
      2, 2, 3, 0.5, 1'000'000, 10);
  CHECK (std::abs (residual_key_rate (p, chi, g, rate) - resid.mean) < 4.0 * resid.stderr_);
  CHECK (residual_key_rate (p, chi, g, 0.0) == doctest::Approx (ergodic_secrecy_rate (p, chi, g)).epsilon (1e-9));
}

TEST_CASE ("delay floor")
{
  const FadingDistribution chi (ChiSquare{4});
  CHECK (delay_floor (PowerPolicy (MainInversion{std::exp (1.0) - 1.0}, CsiMode::Main), chi, chi)
         == doctest::Approx (1.0).epsilon (1e-15));
  CHECK (delay_floor (PowerPolicy (ConstantPower{10.0}, CsiMode::Full), chi, chi) == 0.0);
  CHECK (delay_floor (PowerPolicy (FullInversion{3.0}, CsiMode::Full), chi, chi) == doctest::Approx (std::log (4.0)));
  CHECK (delay_floor (PowerPolicy (TruncatedMainInversion{3.0, 0.5}, CsiMode::Main), chi, chi) == 0.0);
  CHECK (delay_floor (PowerPolicy (ConstantPower{2.0}, CsiMode::Full), FadingDistribution (Degenerate{1.5}), chi)
         == doctest::Approx (std::log (4.0)));

  // essential infimum holds on samples
  const auto p = calibrate ({FamilyKind::FullInversion, 0.0}, chi, chi, 100.0, CsiMode::Full);
  const double floor = delay_floor (p, chi, chi);
  std::mt19937_64 eng (17);
  std::gamma_distribution<double> g (2.0, 2.0);
  bool ok = true;
  for (int i = 0; i < 1'000'000; ++i)
    {
      const ChannelState h{g (eng), g (eng)};
      ok = ok && floor <= std::log1p (p.power (h) * h.h_m) + 1e-12;
    }
  CHECK (ok);
}

TEST_CASE ("pad rate cap and wiretap floor")
{
  const FadingDistribution chi (ChiSquare{4});
  CHECK (otp_rate_cap (PowerPolicy (FullInversion{3.0}, CsiMode::Full), chi, chi) == doctest::Approx (std::log (4.0)));
  CHECK (otp_rate_cap (PowerPolicy (MainInversion{3.0}, CsiMode::Main), chi, chi) == 0.0);
  const FadingDistribution hm (Degenerate{3.0}), he (Degenerate{1.0});
  const PowerPolicy unit (ConstantPower{1.0}, CsiMode::Full);
  CHECK (otp_rate_cap (unit, hm, he) == doctest::Approx (std::log (2.0)));
  CHECK (dprime_floor (unit, hm, he, KeyShareRule{0.0}) == 0.0);
  CHECK (dprime_floor (unit, hm, he, KeyShareRule{2.0}) == doctest::Approx (std::log (1.5)));
  CHECK (dprime_floor (unit, chi, chi, KeyShareRule{2.0}) == 0.0);
}
