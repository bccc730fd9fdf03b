#pragma once

// Expectations over the joint law of (h_m, h_e). Each kernel has an OpenMP
// version and a serial reference; both produce bit-identical results because
// partial results are always combined in a fixed order.

#include "dlsec/fading.hpp"

#include <functional>
#include <vector>

namespace dlsec {

using StateFunction = std::function<double (const ChannelState &)>;

/// Integrand over (h_m, h_e) with the kink locations needed for accurate
/// piecewise quadrature.
struct JointIntegrand
{
  StateFunction value;
  /// Appends h_e breakpoints for the given h_m. May be empty.
  std::function<void (double h_m, std::vector<double> &out)> inner_breaks;
  /// h_m breakpoints.
  std::vector<double> outer_breaks;
};

inline constexpr int kDefaultNodes = 200;
inline constexpr std::size_t kDefaultMcSamples = 1'000'000;
inline constexpr std::size_t kMcChunk = 1u << 14;

/// Tensor-product quadrature of E[value(h)], outer loop in parallel.
double expect_joint (const JointIntegrand &integrand, const FadingDistribution &dist_m,
                     const FadingDistribution &dist_e, int nodes = kDefaultNodes);

double expect_joint_serial (const JointIntegrand &integrand, const FadingDistribution &dist_m,
                            const FadingDistribution &dist_e, int nodes = kDefaultNodes);

/// Monte Carlo estimate over n iid states. The sample is cut into fixed
/// chunks of kMcChunk states; chunk c draws from seed.substream(c), so the
/// result does not depend on thread count or scheduling.
Estimate mc_expect (const StateFunction &f, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                    std::size_t n, const RngSeed &seed);

Estimate mc_expect_serial (const StateFunction &f, const FadingDistribution &dist_m,
                           const FadingDistribution &dist_e, std::size_t n, const RngSeed &seed);

/// Number of OpenMP threads the parallel kernels use (1 without OpenMP).
int kernel_threads ();

} // namespace dlsec
