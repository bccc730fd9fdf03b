#include "dlsec/expectation.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dlsec {

namespace {

class ErrorSlot
{
public:
  void capture ()
  {
    std::lock_guard lock (m_mutex);
    if (!m_error)
      {
        m_error = std::current_exception ();
      }
  }
  void rethrow () const
  {
    if (m_error)
      {
        std::rethrow_exception (m_error);
      }
  }

private:
  std::mutex m_mutex;
  std::exception_ptr m_error;
};

double
inner_expectation (const JointIntegrand &integrand, const FadingDistribution &dist_e, double h_m, int nodes,
                   std::vector<double> &breaks, QuadratureGrid &grid)
{
  breaks.clear ();
  if (integrand.inner_breaks)
    {
      integrand.inner_breaks (h_m, breaks);
    }
  expectation_grid (dist_e, breaks, nodes, grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.size (); ++j)
    {
      if (grid.w[j] == 0.0)
        {
          continue;
        }
      const double v = integrand.value (ChannelState{h_m, grid.x[j]});
      check_finite (v, grid.x[j], "integrand (inner h_e)");
      acc += grid.w[j] * v;
    }
  return acc;
}

double
ordered_sum (const QuadratureGrid &outer, const std::vector<double> &inner)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < outer.size (); ++i)
    {
      sum += outer.w[i] * inner[i];
    }
  return sum;
}

std::size_t
chunk_count (std::size_t n)
{
  return (n + kMcChunk - 1) / kMcChunk;
}

std::size_t
chunk_size (std::size_t n, std::size_t c)
{
  return std::min (kMcChunk, n - c * kMcChunk);
}

Estimate
combine (const std::vector<RunningStats> &parts)
{
  RunningStats total;
  for (const auto &p : parts)
    {
      total.merge (p);
    }
  return total.estimate ();
}

RunningStats
chunk_stats (const StateFunction &f, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
             std::size_t count, const RngSeed &seed)
{
  auto engine = make_engine (seed);
  RunningStats stats;
  for (std::size_t i = 0; i < count; ++i)
    {
      const double hm = dist_m.draw (engine);
      const double he = dist_e.draw (engine);
      const double v = f (ChannelState{hm, he});
      check_finite (v, hm, "Monte Carlo integrand");
      stats.add (v);
    }
  return stats;
}

void
check_mc_args (std::size_t n)
{
  if (n < 1)
    {
      throw std::invalid_argument ("mc_expect needs n >= 1");
    }
}

} // namespace

int
kernel_threads ()
{
#ifdef _OPENMP
  return omp_get_max_threads ();
#else
  return 1;
#endif
}

double
expect_joint_serial (const JointIntegrand &integrand, const FadingDistribution &dist_m,
                     const FadingDistribution &dist_e, int nodes)
{
  QuadratureGrid outer;
  expectation_grid (dist_m, integrand.outer_breaks, nodes, outer);
  std::vector<double> inner (outer.size ());
  std::vector<double> breaks;
  QuadratureGrid grid;
  for (std::size_t i = 0; i < outer.size (); ++i)
    {
      inner[i] = outer.w[i] == 0.0 ? 0.0 : inner_expectation (integrand, dist_e, outer.x[i], nodes, breaks, grid);
    }
  return ordered_sum (outer, inner);
}

double
expect_joint (const JointIntegrand &integrand, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
              int nodes)
{
  QuadratureGrid outer;
  expectation_grid (dist_m, integrand.outer_breaks, nodes, outer);
  std::vector<double> inner (outer.size ());
  const auto count = static_cast<std::ptrdiff_t> (outer.size ());
  ErrorSlot error;
#pragma omp parallel if (count > 1)
  {
    std::vector<double> breaks;
    QuadratureGrid grid;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      {
        try
          {
            inner[i] = outer.w[i] == 0.0 ? 0.0
                                         : inner_expectation (integrand, dist_e, outer.x[i], nodes, breaks, grid);
          }
        catch (...)
          {
            error.capture ();
          }
      }
  }
  error.rethrow ();
  return ordered_sum (outer, inner);
}

Estimate
mc_expect_serial (const StateFunction &f, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                  std::size_t n, const RngSeed &seed)
{
  check_mc_args (n);
  std::vector<RunningStats> parts (chunk_count (n));
  for (std::size_t c = 0; c < parts.size (); ++c)
    {
      parts[c] = chunk_stats (f, dist_m, dist_e, chunk_size (n, c), seed.substream (c));
    }
  return combine (parts);
}

Estimate
mc_expect (const StateFunction &f, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
           std::size_t n, const RngSeed &seed)
{
  check_mc_args (n);
  std::vector<RunningStats> parts (chunk_count (n));
  const auto count = static_cast<std::ptrdiff_t> (parts.size ());
  ErrorSlot error;
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
  for (std::ptrdiff_t c = 0; c < count; ++c)
    {
      try
        {
          const auto cu = static_cast<std::size_t> (c);
          parts[cu] = chunk_stats (f, dist_m, dist_e, chunk_size (n, cu), seed.substream (cu));
        }
      catch (...)
        {
          error.capture ();
        }
    }
  error.rethrow ();
  return combine (parts);
}

} // namespace dlsec
