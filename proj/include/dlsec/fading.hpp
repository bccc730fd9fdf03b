#pragma once

#include "dlsec/numerics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dlsec {

/// One fading realisation: main and eavesdropper power gains.
struct ChannelState
{
  double h_m;
  double h_e;
};

struct ChiSquare
{
  int dof;
  double scale = 1.0;
};

struct GammaLaw
{
  double shape;
  double scale;
};

struct Exponential
{
  double mean;
};

struct Degenerate
{
  double value;
};

/// Closed support [lo, hi] of a gain law; hi may be +inf.
struct Support
{
  double lo;
  double hi;
};

/// Law of a channel power gain. Immutable after construction.
class FadingDistribution
{
public:
  using Kind = std::variant<ChiSquare, GammaLaw, Exponential, Degenerate>;

  explicit FadingDistribution (Kind kind);

  /// Parses `chisq:<dof>[:<scale>]`, `gamma:<shape>:<scale>`, `exp:<mean>`,
  /// `const:<value>` (case-insensitive).
  static FadingDistribution parse (std::string_view spec);

  const Kind &kind () const { return m_kind; }
  std::string to_string () const;

  bool is_degenerate () const { return std::holds_alternative<Degenerate> (m_kind); }
  /// Only for degenerate laws.
  double point_value () const;

  /// Equivalent Gamma(shape, scale) parameters of a continuous law.
  double gamma_shape () const { return m_shape; }
  double gamma_scale () const { return m_scale; }

  Support support () const;
  double mean () const;
  double pdf (double x) const;
  double draw (Engine &engine) const;

private:
  Kind m_kind;
  double m_shape = 0.0;
  double m_scale = 0.0;
  double m_log_norm = 0.0;
};

double pdf (const FadingDistribution &dist, double x);

/// n iid draws; deterministic in seed.
std::vector<double> sample (const FadingDistribution &dist, const RngSeed &seed, std::size_t n);

/// E[1/h]; nullopt when the moment diverges.
std::optional<double> inverse_moment (const FadingDistribution &dist);

/// E[1/min(h_m, h_e)] for independent gains; nullopt when divergent.
std::optional<double> inverse_min_moment (const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                                          int nodes = 200);

/// E[1/h ; h >= cutoff], always finite for cutoff > 0.
double truncated_inverse_moment (const FadingDistribution &dist, double cutoff, int nodes = 200);

/// P(h < x) restricted to "has mass strictly below x".
bool has_mass_below (const FadingDistribution &dist, double x);

/// Quadrature grid carrying the law's probability weights. Degenerate laws
/// produce a single node of weight 1.
void expectation_grid (const FadingDistribution &dist, std::span<const double> breaks, int nodes,
                       QuadratureGrid &out);

} // namespace dlsec
