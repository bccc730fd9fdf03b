#pragma once

// Upper and lower bounds on the delay-limited secrecy capacity of a
// block-fading wiretap channel, for full CSI (both gains known at the
// transmitter) and main CSI (only h_m known). All values in nats/use.

#include "dlsec/rates.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlsec {

struct BoundOptions
{
  int nodes = kDefaultNodes;
  /// Bracket width for the 1-D searches over kappa and log(h_min).
  double search_tol = 1e-4;
  /// Bracket width of the key-balance fixed point.
  double fixed_point_tol = 1e-10;
  /// Fixed q(h) = max(h_e, kappa); searched when empty.
  std::optional<double> kappa;
};

struct BoundResult
{
  double value = 0.0;
  PowerPolicy policy{ConstantPower{0.0}, CsiMode::Full};
  /// Which term of the outer min binds: "ergodic", "delay", "key", "zero".
  std::string binding = "zero";
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
  /// Lower bounds: the rate constraints hold at `value` within 1e-9.
  bool certified = true;
};

BoundResult upper_full (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                        const std::vector<FamilySpec> &menu, const BoundOptions &opts = {});

BoundResult lower_full (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                        const std::vector<FamilySpec> &menu, const BoundOptions &opts = {});

BoundResult upper_main (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                        const std::vector<FamilySpec> &menu, const BoundOptions &opts = {});

BoundResult lower_main (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                        const std::vector<FamilySpec> &menu, const BoundOptions &opts = {});

/// Per-policy evaluations behind the menu searches.
BoundResult upper_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m,
                              const FadingDistribution &dist_e, const BoundOptions &opts = {});
BoundResult lower_full_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m,
                                   const FadingDistribution &dist_e, const BoundOptions &opts = {});
BoundResult lower_main_for_policy (const PowerPolicy &policy, const FadingDistribution &dist_m,
                                   const FadingDistribution &dist_e, const BoundOptions &opts = {});

/// Key balance of the main-CSI scheme for a fixed policy: the data rate R
/// must satisfy R = min{K(R), R_d} with K(R) = E[(r_main - R - r_eve)^+].
class KeyBalance
{
public:
  KeyBalance (PowerPolicy policy, FadingDistribution dist_m, FadingDistribution dist_e, int nodes = kDefaultNodes);

  double delay_floor () const { return m_floor; }
  double key_rate (double data_rate) const;
  /// f(R) = R - min{K(R), R_d}; strictly increasing, f(0) <= 0 <= f(R_d).
  double residual (double data_rate) const;

  struct Solution
  {
    double rate;
    int evaluations;
  };
  Solution solve (double tol = 1e-10) const;

private:
  PowerPolicy m_policy;
  FadingDistribution m_dist_m;
  FadingDistribution m_dist_e;
  int m_nodes;
  double m_floor;
};

struct HighSnrLimit
{
  double value = 0.0;
  /// E[1/min(h_m, h_e)] < inf, the condition under which the limit is achieved.
  bool invertible = false;
  std::optional<double> inverse_min_moment;
};

HighSnrLimit high_snr_limit (const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                             int nodes = kDefaultNodes);

struct BoundSet
{
  double p_bar = 0.0;
  BoundResult upper_full;
  BoundResult lower_full;
  BoundResult upper_main;
  BoundResult lower_main;
  HighSnrLimit limit;
};

BoundSet compute_bounds (const FadingDistribution &dist_m, const FadingDistribution &dist_e, double p_bar,
                         const std::vector<FamilySpec> &menu, const BoundOptions &opts = {});

double db_to_linear (double db);
double linear_to_db (double linear);

} // namespace dlsec
