#pragma once

#include "dlsec/fading.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dlsec {

enum class CsiMode
{
  Full,
  Main
};

const char *to_string (CsiMode csi);

/// Thrown when an inversion family needs an inverse moment that diverges.
class NonInvertibleChannel : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A policy queried with channel knowledge it is not allowed to use.
class CapabilityError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

struct ConstantPower
{
  double power;
};

/// P(h) = c / min(h_m, h_e)
struct FullInversion
{
  double c;
};

/// P(h_m) = c / h_m
struct MainInversion
{
  double c;
};

/// P(h_m) = c / h_m for h_m >= h_min, else 0
struct TruncatedMainInversion
{
  double c;
  double h_min;
};

class PowerPolicy
{
public:
  using Family = std::variant<ConstantPower, FullInversion, MainInversion, TruncatedMainInversion>;

  PowerPolicy (Family family, CsiMode csi);

  const Family &family () const { return m_family; }
  CsiMode csi () const { return m_csi; }

  /// True when the rule reads only h_m.
  bool main_only () const;

  /// c for inversion families, P for constant power.
  double scale () const;
  /// Same family with the scale replaced.
  PowerPolicy with_scale (double scale) const;

  double power (const ChannelState &state) const;

  std::string name () const;

private:
  Family m_family;
  CsiMode m_csi;
};

double power (const PowerPolicy &policy, const ChannelState &state);

enum class FamilyKind
{
  Constant,
  FullInversion,
  MainInversion,
  TruncatedMainInversion
};

/// Family with its non-scale parameters; the scale is fixed by calibrate().
struct FamilySpec
{
  FamilyKind kind = FamilyKind::Constant;
  /// Truncation cutoff; only for TruncatedMainInversion. A value <= 0 asks
  /// the bound search to optimise the cutoff.
  double h_min = 0.0;

  /// `const`, `full-inv`, `main-inv`, `trunc-inv` or `trunc-inv:<h_min>`.
  static FamilySpec parse (std::string_view text);
  std::string to_string () const;
  bool main_only () const { return kind != FamilyKind::FullInversion; }
};

/// Comma-separated list of family specs.
std::vector<FamilySpec> parse_family_menu (std::string_view text);

/// The full menu: const, full-inv, main-inv, trunc-inv (searched cutoff).
std::vector<FamilySpec> default_menu ();

/// Average power E[P(h)] of the unit-scale family member, i.e. the
/// coefficient k with E[P] = k * scale. Throws NonInvertibleChannel when divergent.
double unit_average_power (const FamilySpec &family, const FadingDistribution &dist_m,
                           const FadingDistribution &dist_e, int nodes = 200);

/// Picks the scale so that E[P(h)] = p_bar exactly.
PowerPolicy calibrate (const FamilySpec &family, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                       double p_bar, CsiMode csi, int nodes = 200);

} // namespace dlsec
