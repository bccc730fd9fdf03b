#pragma once

// Deterministic numeric kernels: half-line Gauss-Legendre quadrature,
// bisection, golden-section search and seeded random streams.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlsec {

class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Mean of an expectation together with its Monte Carlo standard error.
/// Quadrature results carry std_error == 0.
struct Estimate
{
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 1;
};

/// (seed, stream) pair; identical pairs reproduce identical sequences.
struct RngSeed
{
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  RngSeed substream (std::uint64_t salt) const;
};

using Engine = std::mt19937_64;

Engine make_engine (const RngSeed &seed);

/// Gauss-Legendre nodes and weights on (0, 1).
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached, thread-safe. n >= 1.
const QuadratureRule &gauss_legendre_unit (int n);

/// A flattened set of abscissae with their weights (density already folded in).
struct QuadratureGrid
{
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size () const { return x.size (); }
};

/// Integral of f over (0, inf) via x = t/(1-t) with Gauss-Legendre in t.
/// f is the full integrand (a density-weighted function). nodes >= 8.
double integrate_halfline (const std::function<double (double)> &f, int nodes);

/// Integral of f over [a, b], plain Gauss-Legendre.
double integrate_interval (const std::function<double (double)> &f, double a, double b, int nodes);

/// Integral of f over [a, inf) via x = a + t/(1-t).
double integrate_tail (const std::function<double (double)> &f, double a, int nodes);

/// Quadrature grid for (0, inf) split at the given breakpoints. Non-positive,
/// non-finite and duplicate breakpoints are dropped. Each piece gets `nodes`
/// points; the last piece uses the rational half-line map.
void halfline_grid (std::span<const double> breaks, int nodes, QuadratureGrid &out);

/// Root of a monotone g with a sign change on [lo, hi]. Returns the midpoint
/// of a bracket no wider than tol.
double bisect (const std::function<double (double)> &g, double lo, double hi, double tol);

struct Maximum
{
  double argmax;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
Maximum golden_max (const std::function<double (double)> &f, double lo, double hi, double tol);

/// Welford accumulator; merge() combines partial results in a fixed order.
class RunningStats
{
public:
  void add (double x);
  void merge (const RunningStats &other);

  std::size_t count () const { return m_n; }
  double mean () const { return m_mean; }
  double variance () const;
  Estimate estimate () const;

private:
  std::size_t m_n = 0;
  double m_mean = 0.0;
  double m_m2 = 0.0;
};

void check_finite (double value, double at, const char *what);

} // namespace dlsec
