#include "dlsec/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace dlsec;

TEST_CASE ("gauss-legendre rule on the unit interval")
{
  const auto &r = gauss_legendre_unit (10);
  double w = 0.0;
  for (double x : r.weights)
    {
      w += x;
    }
  CHECK (w == doctest::Approx (1.0).epsilon (1e-14));
  // exact for polynomials of degree 2n-1
  double m19 = 0.0;
  for (int i = 0; i < 10; ++i)
    {
      m19 += r.weights[i] * std::pow (r.nodes[i], 19);
    }
  CHECK (m19 == doctest::Approx (1.0 / 20.0).epsilon (1e-13));
  CHECK_THROWS (gauss_legendre_unit (0));
}

TEST_CASE ("halfline integration against densities")
{
  SUBCASE ("total mass of Exp(1)")
  {
    const double v = integrate_halfline ([] (double x) { return std::exp (-x); }, 200);
    CHECK (std::abs (v - 1.0) < 1e-8);
  }
  SUBCASE ("mean of chi-square with 4 dof")
  {
    const double v = integrate_halfline ([] (double x) { return x * oracle::gamma_pdf (x, 2.0, 2.0); }, 200);
    CHECK (std::abs (v - 4.0) < 1e-6);
  }
  SUBCASE ("inverse moment of Gamma(2,1)")
  {
    const double v = integrate_halfline ([] (double x) { return oracle::gamma_pdf (x, 2.0, 1.0) / x; }, 400);
    CHECK (std::abs (v - 1.0) < 1e-5);
    // independent log-grid Simpson agrees with the same closed form
    const double s = oracle::log_simpson ([] (double x) { return oracle::gamma_pdf (x, 2.0, 1.0) / x; });
    CHECK (std::abs (s - 1.0) < 1e-8);
  }
  SUBCASE ("deterministic")
  {
    const auto f = [] (double x) { return std::log1p (x) * std::exp (-x); };
    const double a = integrate_halfline (f, 200);
    const double b = integrate_halfline (f, 200);
    CHECK (std::memcmp (&a, &b, sizeof a) == 0);
  }
  SUBCASE ("non-finite integrand is reported")
  {
    CHECK_THROWS_AS (integrate_halfline ([] (double) { return std::nan (""); }, 16), NumericError);
    CHECK_THROWS_AS (integrate_halfline ([] (double) { return 1.0; }, 4), std::invalid_argument);
  }
}

TEST_CASE ("interval and tail pieces add up")
{
  const auto f = [] (double x) { return oracle::gamma_pdf (x, 3.0, 0.5); };
  const double whole = integrate_halfline (f, 200);
  const double split = integrate_interval (f, 0.0, 1.3, 100) + integrate_tail (f, 1.3, 100);
  CHECK (split == doctest::Approx (whole).epsilon (1e-10));
  CHECK (integrate_interval ([] (double x) { return x * x; }, 1.0, 4.0, 8) == doctest::Approx (21.0));
}

TEST_CASE ("halfline grid honours breakpoints")
{
  QuadratureGrid g;
  const double breaks[] = {1.0, 2.0};
  halfline_grid (breaks, 40, g);
  REQUIRE (g.size () == 120);
  double total = 0.0, kink = 0.0;
  for (std::size_t i = 0; i < g.size (); ++i)
    {
      const double w = g.w[i] * std::exp (-g.x[i]);
      total += w;
      kink += w * std::abs (g.x[i] - 1.0);
    }
  CHECK (std::abs (total - 1.0) < 1e-10);
  // E|X-1| for Exp(1) = 2/e
  CHECK (std::abs (kink - 2.0 / std::exp (1.0)) < 1e-10);
}

TEST_CASE ("bisect")
{
  CHECK (bisect ([] (double x) { return x - 1.0; }, 0.0, 2.0, 1e-12) == doctest::Approx (1.0).epsilon (1e-12));
  const double r = bisect ([] (double x) { return x - std::min (2.0 - x, 5.0); }, 0.0, 5.0, 1e-9);
  CHECK (std::abs (r - 1.0) <= 1e-9);
  CHECK (std::abs (bisect ([] (double x) { return x; }, -1.0, 1.0, 1e-12)) <= 1e-12);
  CHECK_THROWS_AS (bisect ([] (double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-9), NumericError);

  SUBCASE ("matches a fine grid scan")
  {
    const auto g = [] (double x) { return std::tanh (x - 0.3719) + 0.1 * x; };
    const int n = 100000;
    double scan = 0.0;
    for (int i = 0; i <= n; ++i)
      {
        const double x = -2.0 + 4.0 * i / n;
        if (g (x) >= 0.0)
          {
            scan = x;
            break;
          }
      }
    const double step = 4.0 / n;
    CHECK (std::abs (bisect (g, -2.0, 2.0, 1e-10) - scan) <= step);
  }
}

TEST_CASE ("golden section maximum")
{
  auto m = golden_max ([] (double x) { return -(x - 3.0) * (x - 3.0); }, 0.0, 10.0, 1e-8);
  CHECK (m.argmax == doctest::Approx (3.0).epsilon (1e-7));
  CHECK (std::abs (m.value) < 1e-12);
  m = golden_max ([] (double x) { return x * (1.0 - x); }, 0.0, 1.0, 1e-8);
  CHECK (m.argmax == doctest::Approx (0.5).epsilon (1e-7));
  CHECK (m.value == doctest::Approx (0.25).epsilon (1e-12));

  const auto kink = [] (double x) { return std::min (std::log1p (x), 2.0 - x); };
  const double crossing = oracle::regula_falsi ([] (double x) { return std::log1p (x) - (2.0 - x); }, 0.0, 2.0);
  m = golden_max (kink, 0.0, 2.0, 1e-6);
  CHECK (std::abs (m.argmax - crossing) < 1e-6);
  CHECK (m.value == doctest::Approx (std::log1p (crossing)).epsilon (1e-6));
  CHECK_THROWS (golden_max (kink, 1.0, 1.0, 1e-6));
}

TEST_CASE ("running statistics")
{
  RunningStats a, b, all;
  for (int i = 0; i < 1000; ++i)
    {
      const double x = std::sin (i * 0.37) * 3.0 + i * 1e-3;
      (i < 400 ? a : b).add (x);
      all.add (x);
    }
  a.merge (b);
  CHECK (a.count () == all.count ());
  CHECK (a.mean () == doctest::Approx (all.mean ()).epsilon (1e-13));
  CHECK (a.variance () == doctest::Approx (all.variance ()).epsilon (1e-12));

  RunningStats constant;
  for (int i = 0; i < 10; ++i)
    {
      constant.add (2.5);
    }
  const auto e = constant.estimate ();
  CHECK (e.mean == 2.5);
  CHECK (e.std_error == 0.0);
  CHECK (e.samples == 10);
}

TEST_CASE ("seed substreams")
{
  const RngSeed s{42, 7};
  CHECK (s.substream (3).seed == s.substream (3).seed);
  CHECK (s.substream (3).stream == s.substream (3).stream);
  auto e1 = make_engine (s.substream (1));
  auto e2 = make_engine (s.substream (2));
  auto e1b = make_engine (s.substream (1));
  const auto x1 = e1 ();
  CHECK (x1 == e1b ());
  CHECK (x1 != e2 ());
  CHECK (make_engine (RngSeed{42, 7}) () != make_engine (RngSeed{42, 8}) ());
}

TEST_CASE ("check_finite message")
{
  try
    {
      check_finite (std::numeric_limits<double>::infinity (), 0.5, "integrand");
      FAIL ("expected throw");
    }
  catch (const NumericError &e)
    {
      CHECK (std::string (e.what ()).find ("not finite at node x=0.5") != std::string::npos);
    }
}
