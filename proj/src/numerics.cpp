#include "dlsec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace dlsec {

namespace {

std::uint64_t
splitmix (std::uint64_t z)
{
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

RngSeed
RngSeed::substream (std::uint64_t salt) const
{
  return RngSeed{seed, splitmix (splitmix (stream) ^ splitmix (~salt))};
}

Engine
make_engine (const RngSeed &seed)
{
  std::seed_seq seq{static_cast<std::uint32_t> (seed.seed), static_cast<std::uint32_t> (seed.seed >> 32),
                    static_cast<std::uint32_t> (seed.stream),
                    static_cast<std::uint32_t> (seed.stream >> 32)};
  return Engine (seq);
}

namespace {

QuadratureRule
compute_gauss_legendre (int n)
{
  // Newton iteration on P_n, mapped from [-1, 1] to (0, 1).
  QuadratureRule rule;
  rule.nodes.resize (n);
  rule.weights.resize (n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i)
    {
      double z = std::cos (std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter)
        {
          double p1 = 1.0;
          double p2 = 0.0;
          for (int j = 1; j <= n; ++j)
            {
              const double p3 = p2;
              p2 = p1;
              p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
          dp = n * (z * p1 - p2) / (z * z - 1.0);
          const double z1 = z;
          z = z1 - p1 / dp;
          if (std::abs (z - z1) < 1e-15)
            {
              break;
            }
        }
      // recompute the derivative at the converged root
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j)
        {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      rule.nodes[i] = 0.5 * (1.0 - z);
      rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
      rule.weights[i] = 0.5 * w;
      rule.weights[n - 1 - i] = 0.5 * w;
    }
  return rule;
}

std::string
node_message (const char *what, double at)
{
  std::ostringstream os;
  os.precision (17);
  os << what << " not finite at node x=" << at;
  return os.str ();
}

} // namespace

const QuadratureRule &
gauss_legendre_unit (int n)
{
  if (n < 1)
    {
      throw std::invalid_argument ("quadrature needs at least one node");
    }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock (mutex);
  auto &slot = cache[n];
  if (!slot)
    {
      slot = std::make_unique<QuadratureRule> (compute_gauss_legendre (n));
    }
  return *slot;
}

void
check_finite (double value, double at, const char *what)
{
  if (!std::isfinite (value))
    {
      throw NumericError (node_message (what, at));
    }
}

double
integrate_halfline (const std::function<double (double)> &f, int nodes)
{
  if (nodes < 8)
    {
      throw std::invalid_argument ("integrate_halfline needs nodes >= 8");
    }
  return integrate_tail (f, 0.0, nodes);
}

double
integrate_interval (const std::function<double (double)> &f, double a, double b, int nodes)
{
  const auto &rule = gauss_legendre_unit (nodes);
  const double len = b - a;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i)
    {
      const double x = a + len * rule.nodes[i];
      const double v = f (x);
      check_finite (v, x, "integrand");
      sum += rule.weights[i] * v;
    }
  return sum * len;
}

double
integrate_tail (const std::function<double (double)> &f, double a, int nodes)
{
  const auto &rule = gauss_legendre_unit (nodes);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i)
    {
      const double t = rule.nodes[i];
      const double u = 1.0 - t;
      const double x = a + t / u;
      const double v = f (x);
      check_finite (v, x, "integrand");
      sum += rule.weights[i] * v / (u * u);
    }
  return sum;
}

void
halfline_grid (std::span<const double> breaks, int nodes, QuadratureGrid &out)
{
  out.x.clear ();
  out.w.clear ();
  const auto &rule = gauss_legendre_unit (nodes);

  double cuts[16];
  std::size_t ncuts = 0;
  for (double b : breaks)
    {
      if (std::isfinite (b) && b > 0.0 && ncuts < std::size (cuts))
        {
          cuts[ncuts++] = b;
        }
    }
  std::sort (cuts, cuts + ncuts);
  ncuts = static_cast<std::size_t> (std::unique (cuts, cuts + ncuts) - cuts);

  out.x.reserve ((ncuts + 1) * nodes);
  out.w.reserve ((ncuts + 1) * nodes);
  double lo = 0.0;
  for (std::size_t k = 0; k < ncuts; ++k)
    {
      const double len = cuts[k] - lo;
      for (int i = 0; i < nodes; ++i)
        {
          out.x.push_back (lo + len * rule.nodes[i]);
          out.w.push_back (len * rule.weights[i]);
        }
      lo = cuts[k];
    }
  for (int i = 0; i < nodes; ++i)
    {
      const double t = rule.nodes[i];
      const double u = 1.0 - t;
      out.x.push_back (lo + t / u);
      out.w.push_back (rule.weights[i] / (u * u));
    }
}

double
bisect (const std::function<double (double)> &g, double lo, double hi, double tol)
{
  if (!(tol > 0.0))
    {
      throw std::invalid_argument ("bisect: tol must be positive");
    }
  if (lo > hi)
    {
      std::swap (lo, hi);
    }
  double glo = g (lo);
  const double ghi = g (hi);
  check_finite (glo, lo, "bisect function");
  check_finite (ghi, hi, "bisect function");
  if (glo == 0.0)
    {
      return lo;
    }
  if (ghi == 0.0)
    {
      return hi;
    }
  if ((glo > 0.0) == (ghi > 0.0))
    {
      throw NumericError ("bisect: no bracketing, endpoints have the same sign");
    }
  while (hi - lo > tol)
    {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi)
        {
          break;
        }
      const double gm = g (mid);
      check_finite (gm, mid, "bisect function");
      if (gm == 0.0)
        {
          return mid;
        }
      if ((gm > 0.0) == (glo > 0.0))
        {
          lo = mid;
          glo = gm;
        }
      else
        {
          hi = mid;
        }
    }
  return 0.5 * (lo + hi);
}

Maximum
golden_max (const std::function<double (double)> &f, double lo, double hi, double tol)
{
  if (!(lo < hi))
    {
      throw std::invalid_argument ("golden_max: need lo < hi");
    }
  if (!(tol > 0.0))
    {
      throw std::invalid_argument ("golden_max: tol must be positive");
    }
  const double inv_phi = (std::sqrt (5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f (c);
  double fd = f (d);
  while (b - a > tol)
    {
      if (fc >= fd)
        {
          b = d;
          d = c;
          fd = fc;
          c = b - inv_phi * (b - a);
          fc = f (c);
        }
      else
        {
          a = c;
          c = d;
          fc = fd;
          d = a + inv_phi * (b - a);
          fd = f (d);
        }
    }
  const double mid = 0.5 * (a + b);
  return Maximum{mid, f (mid)};
}

void
RunningStats::add (double x)
{
  ++m_n;
  const double delta = x - m_mean;
  m_mean += delta / static_cast<double> (m_n);
  m_m2 += delta * (x - m_mean);
}

void
RunningStats::merge (const RunningStats &other)
{
  if (other.m_n == 0)
    {
      return;
    }
  if (m_n == 0)
    {
      *this = other;
      return;
    }
  const double na = static_cast<double> (m_n);
  const double nb = static_cast<double> (other.m_n);
  const double n = na + nb;
  const double delta = other.m_mean - m_mean;
  m_mean += delta * nb / n;
  m_m2 += other.m_m2 + delta * delta * na * nb / n;
  m_n += other.m_n;
}

double
RunningStats::variance () const
{
  return m_n > 1 ? m_m2 / static_cast<double> (m_n - 1) : 0.0;
}

Estimate
RunningStats::estimate () const
{
  Estimate e;
  e.mean = m_mean;
  e.samples = m_n;
  e.std_error = m_n > 1 ? std::sqrt (variance () / static_cast<double> (m_n)) : 0.0;
  return e;
}

} // namespace dlsec
