#include "dlsec/fading.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dlsec;

namespace {

double
sample_mean (const std::vector<double> &x)
{
  double s = 0.0;
  for (double v : x)
    {
      s += v;
    }
  return s / x.size ();
}

/// Two-sample Kolmogorov-Smirnov statistic.
double
ks_statistic (std::vector<double> a, std::vector<double> b)
{
  std::sort (a.begin (), a.end ());
  std::sort (b.begin (), b.end ());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size () && j < b.size ())
    {
      const double x = std::min (a[i], b[j]);
      while (i < a.size () && a[i] <= x)
        {
          ++i;
        }
      while (j < b.size () && b[j] <= x)
        {
          ++j;
        }
      d = std::max (d, std::abs (double (i) / a.size () - double (j) / b.size ()));
    }
  return d;
}

} // namespace

TEST_CASE ("parsing and printing")
{
  CHECK (FadingDistribution::parse ("chisq:4").to_string () == "chisq:4");
  CHECK (FadingDistribution::parse ("CHISQ:4:2").gamma_scale () == doctest::Approx (4.0));
  CHECK (FadingDistribution::parse ("gamma:2:1").gamma_shape () == 2.0);
  CHECK (FadingDistribution::parse ("exp:1").mean () == 1.0);
  CHECK (FadingDistribution::parse ("const:2.5").is_degenerate ());
  CHECK (FadingDistribution::parse ("const:2.5").point_value () == 2.5);
  for (const char *bad : {"", "chisq", "chisq:0", "gamma:2", "gamma:-1:1", "exp:0", "const:-1", "rayleigh:1", "exp:x"})
    {
      CHECK_THROWS_AS (FadingDistribution::parse (bad), std::invalid_argument);
    }
}

TEST_CASE ("pdf")
{
  const FadingDistribution e (Exponential{1.0});
  CHECK (e.pdf (1e-12) == doctest::Approx (1.0).epsilon (1e-10));
  const FadingDistribution c (ChiSquare{4});
  CHECK (c.pdf (2.0) == doctest::Approx (0.5 * std::exp (-1.0)).epsilon (1e-14));
  CHECK (c.pdf (2.0) == doctest::Approx (oracle::gamma_pdf (2.0, 2.0, 2.0)).epsilon (1e-14));
  CHECK (pdf (FadingDistribution (GammaLaw{3.0, 0.5}), 0.7)
         == doctest::Approx (oracle::gamma_pdf (0.7, 3.0, 0.5)).epsilon (1e-13));
  const FadingDistribution d (Degenerate{2.0});
  CHECK_THROWS_AS (d.pdf (2.0), std::domain_error);
  try
    {
      (void) d.pdf (2.0);
    }
  catch (const std::domain_error &err)
    {
      CHECK (std::string (err.what ()).find ("not absolutely continuous") != std::string::npos);
    }
  CHECK_THROWS_AS (c.pdf (0.0), std::invalid_argument);
}

TEST_CASE ("pdf integrates to one")
{
  for (const char *spec : {"exp:1", "exp:3", "chisq:4", "chisq:2", "chisq:6:0.5", "gamma:2:1", "gamma:3:0.5", "gamma:1:7"})
    {
      const auto d = FadingDistribution::parse (spec);
      const double mass = oracle::log_simpson ([&] (double x) { return d.pdf (x); }, -40.0, 8.0, 40000);
      INFO (spec);
      CHECK (std::abs (mass - 1.0) < 1e-8);
    }
}

TEST_CASE ("sampling")
{
  const auto point = sample (FadingDistribution (Degenerate{3.5}), RngSeed{1, 0}, 4);
  CHECK (point == std::vector<double>{3.5, 3.5, 3.5, 3.5});

  SUBCASE ("chi-square mean")
  {
    const auto x = sample (FadingDistribution (ChiSquare{4}), RngSeed{11, 0}, 1'000'000);
    // var = 2k = 8
    CHECK (std::abs (sample_mean (x) - 4.0) < 3.0 * std::sqrt (8.0 / x.size ()));
  }
  SUBCASE ("gamma variance")
  {
    const auto x = sample (FadingDistribution (GammaLaw{2.0, 1.0}), RngSeed{12, 0}, 1'000'000);
    const double m = sample_mean (x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x)
      {
        const double d = (v - m) * (v - m);
        m2 += d;
        m4 += d * d;
      }
    m2 /= x.size () - 1;
    m4 /= x.size ();
    const double se = std::sqrt ((m4 - m2 * m2) / x.size ());
    CHECK (std::abs (m2 - 2.0) < 3.0 * se);
  }
  SUBCASE ("reproducible and stream dependent")
  {
    const FadingDistribution d (Exponential{1.0});
    CHECK (sample (d, RngSeed{5, 1}, 100) == sample (d, RngSeed{5, 1}, 100));
    CHECK (sample (d, RngSeed{5, 1}, 100) != sample (d, RngSeed{5, 2}, 100));
  }
  SUBCASE ("chi-square and gamma(k/2, 2) are indistinguishable")
  {
    const std::size_t n = 100'000;
    const auto a = sample (FadingDistribution (ChiSquare{4}), RngSeed{21, 0}, n);
    const auto b = sample (FadingDistribution (GammaLaw{2.0, 2.0}), RngSeed{22, 0}, n);
    const double critical = 1.628 * std::sqrt (2.0 / n);
    CHECK (ks_statistic (a, b) < critical);
  }
}

TEST_CASE ("support")
{
  CHECK (FadingDistribution (ChiSquare{4}).support ().lo == 0.0);
  CHECK (std::isinf (FadingDistribution (ChiSquare{4}).support ().hi));
  CHECK (FadingDistribution (Degenerate{2.0}).support ().lo == 2.0);
  CHECK (FadingDistribution (Degenerate{2.0}).support ().hi == 2.0);
  CHECK (has_mass_below (FadingDistribution (Exponential{1.0}), 1e-9));
  CHECK_FALSE (has_mass_below (FadingDistribution (Degenerate{2.0}), 2.0));
  CHECK (has_mass_below (FadingDistribution (Degenerate{2.0}), 2.5));
}

TEST_CASE ("inverse moments")
{
  CHECK (*inverse_moment (FadingDistribution (GammaLaw{2.0, 1.0})) == doctest::Approx (1.0));
  CHECK (*inverse_moment (FadingDistribution (ChiSquare{4})) == doctest::Approx (0.5));
  CHECK_FALSE (inverse_moment (FadingDistribution (Exponential{1.0})).has_value ());
  CHECK_FALSE (inverse_moment (FadingDistribution (ChiSquare{2})).has_value ());
  CHECK (*inverse_moment (FadingDistribution (Degenerate{4.0})) == 0.25);

  // 1/((k-1) theta) by independent quadrature
  const double s = oracle::log_simpson ([] (double x) { return oracle::gamma_pdf (x, 3.0, 0.5) / x; });
  CHECK (*inverse_moment (FadingDistribution (GammaLaw{3.0, 0.5})) == doctest::Approx (s).epsilon (1e-8));
}

TEST_CASE ("inverse moment of the minimum")
{
  const FadingDistribution two (Degenerate{2.0});
  CHECK (*inverse_min_moment (two, two) == doctest::Approx (0.5));
  CHECK_FALSE (inverse_min_moment (FadingDistribution (Exponential{1.0}), FadingDistribution (Exponential{1.0})));

  const FadingDistribution chi (ChiSquare{4});
  const auto v = inverse_min_moment (chi, chi);
  REQUIRE (v.has_value ());
  // iid Gamma(2, theta): min has density 2 f(x) S(x), E[1/min] = 1.5 / theta
  CHECK (*v == doctest::Approx (0.75).epsilon (1e-7));
  const auto mc = oracle::gamma_pair_mc ([] (double a, double b) { return 1.0 / std::min (a, b); }, 2, 2, 2, 2,
                                         10'000'000, 3);
  CHECK (std::abs (*v - mc.mean) < 4.0 * mc.stderr_);
  CHECK (*v >= *inverse_moment (chi));

  const FadingDistribution g (GammaLaw{3.0, 0.5});
  const auto mixed = inverse_min_moment (chi, g);
  REQUIRE (mixed.has_value ());
  const auto mc2 = oracle::gamma_pair_mc ([] (double a, double b) { return 1.0 / std::min (a, b); }, 2, 2, 3, 0.5,
                                          2'000'000, 4);
  CHECK (std::abs (*mixed - mc2.mean) < 4.0 * mc2.stderr_);
  CHECK (*mixed >= std::max (*inverse_moment (chi), *inverse_moment (g)));

  // degenerate against continuous
  const auto dc = inverse_min_moment (two, chi);
  REQUIRE (dc.has_value ());
  const double direct = oracle::log_simpson ([] (double x) { return oracle::gamma_pdf (x, 2.0, 2.0) / std::min (x, 2.0); });
  CHECK (*dc == doctest::Approx (direct).epsilon (1e-7));
}

TEST_CASE ("truncated inverse moment")
{
  const FadingDistribution e (Exponential{1.0});
  const double v = truncated_inverse_moment (e, 0.5);
  const double ref = oracle::simpson ([] (double x) { return std::exp (-std::exp (x)); }, std::log (0.5), 6.0, 20000);
  CHECK (v == doctest::Approx (ref).epsilon (1e-8));
}
