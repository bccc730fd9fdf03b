#include "dlsec/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace dlsec {

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

void
check_scale (double v)
{
  if (!(v >= 0.0) || !std::isfinite (v))
    {
      throw std::invalid_argument ("policy scale must be finite and >= 0");
    }
}

} // namespace

const char *
to_string (CsiMode csi)
{
  return csi == CsiMode::Full ? "full" : "main";
}

PowerPolicy::PowerPolicy (Family family, CsiMode csi) : m_family (family), m_csi (csi)
{
  check_scale (scale ());
  if (const auto *t = std::get_if<TruncatedMainInversion> (&m_family))
    {
      if (!(t->h_min > 0.0) || !std::isfinite (t->h_min))
        {
          throw std::invalid_argument ("truncation cutoff h_min must be positive");
        }
    }
}

bool
PowerPolicy::main_only () const
{
  return !std::holds_alternative<FullInversion> (m_family);
}

double
PowerPolicy::scale () const
{
  return std::visit (overloaded{
                         [] (const ConstantPower &p) { return p.power; },
                         [] (const FullInversion &p) { return p.c; },
                         [] (const MainInversion &p) { return p.c; },
                         [] (const TruncatedMainInversion &p) { return p.c; },
                     },
                     m_family);
}

PowerPolicy
PowerPolicy::with_scale (double s) const
{
  Family f = std::visit (overloaded{
                             [&] (const ConstantPower &) -> Family { return ConstantPower{s}; },
                             [&] (const FullInversion &) -> Family { return FullInversion{s}; },
                             [&] (const MainInversion &) -> Family { return MainInversion{s}; },
                             [&] (const TruncatedMainInversion &p) -> Family {
                               return TruncatedMainInversion{s, p.h_min};
                             },
                         },
                         m_family);
  return PowerPolicy (f, m_csi);
}

double
PowerPolicy::power (const ChannelState &h) const
{
  return std::visit (overloaded{
                         [] (const ConstantPower &p) { return p.power; },
                         [&] (const FullInversion &p) {
                           if (m_csi != CsiMode::Full)
                             {
                               throw CapabilityError ("full channel inversion needs the eavesdropper gain (full CSI)");
                             }
                           return p.c / std::min (h.h_m, h.h_e);
                         },
                         [&] (const MainInversion &p) { return p.c / h.h_m; },
                         [&] (const TruncatedMainInversion &p) { return h.h_m >= p.h_min ? p.c / h.h_m : 0.0; },
                     },
                     m_family);
}

std::string
PowerPolicy::name () const
{
  std::ostringstream os;
  os.precision (17);
  std::visit (overloaded{
                  [&] (const ConstantPower &) { os << "const"; },
                  [&] (const FullInversion &) { os << "full-inv"; },
                  [&] (const MainInversion &) { os << "main-inv"; },
                  [&] (const TruncatedMainInversion &p) { os << "trunc-inv:" << p.h_min; },
              },
              m_family);
  return os.str ();
}

double
power (const PowerPolicy &policy, const ChannelState &state)
{
  return policy.power (state);
}

FamilySpec
FamilySpec::parse (std::string_view text)
{
  std::string s (text);
  std::transform (s.begin (), s.end (), s.begin (), [] (unsigned char c) { return static_cast<char> (std::tolower (c)); });
  if (s == "const")
    {
      return {FamilyKind::Constant, 0.0};
    }
  if (s == "full-inv")
    {
      return {FamilyKind::FullInversion, 0.0};
    }
  if (s == "main-inv")
    {
      return {FamilyKind::MainInversion, 0.0};
    }
  if (s == "trunc-inv")
    {
      return {FamilyKind::TruncatedMainInversion, 0.0};
    }
  if (s.rfind ("trunc-inv:", 0) == 0)
    {
      const std::string num = s.substr (10);
      char *end = nullptr;
      const double h = std::strtod (num.c_str (), &end);
      if (num.empty () || end != num.c_str () + num.size () || !(h > 0.0) || !std::isfinite (h))
        {
          throw std::invalid_argument ("trunc-inv cutoff must be a positive number: '" + std::string (text) + "'");
        }
      return {FamilyKind::TruncatedMainInversion, h};
    }
  throw std::invalid_argument ("unknown power policy '" + std::string (text)
                               + "' (expected const, full-inv, main-inv, trunc-inv[:h_min])");
}

std::string
FamilySpec::to_string () const
{
  switch (kind)
    {
    case FamilyKind::Constant:
      return "const";
    case FamilyKind::FullInversion:
      return "full-inv";
    case FamilyKind::MainInversion:
      return "main-inv";
    case FamilyKind::TruncatedMainInversion:
      {
        if (h_min <= 0.0)
          {
            return "trunc-inv";
          }
        std::ostringstream os;
        os.precision (17);
        os << "trunc-inv:" << h_min;
        return os.str ();
      }
    }
  return "?";
}

std::vector<FamilySpec>
parse_family_menu (std::string_view text)
{
  std::vector<FamilySpec> menu;
  std::size_t start = 0;
  while (start <= text.size ())
    {
      auto pos = text.find (',', start);
      if (pos == std::string_view::npos)
        {
          pos = text.size ();
        }
      auto item = text.substr (start, pos - start);
      while (!item.empty () && std::isspace (static_cast<unsigned char> (item.front ())))
        {
          item.remove_prefix (1);
        }
      while (!item.empty () && std::isspace (static_cast<unsigned char> (item.back ())))
        {
          item.remove_suffix (1);
        }
      if (!item.empty ())
        {
          menu.push_back (FamilySpec::parse (item));
        }
      start = pos + 1;
    }
  if (menu.empty ())
    {
      throw std::invalid_argument ("empty power policy list");
    }
  return menu;
}

std::vector<FamilySpec>
default_menu ()
{
  return {{FamilyKind::Constant, 0.0},
          {FamilyKind::FullInversion, 0.0},
          {FamilyKind::MainInversion, 0.0},
          {FamilyKind::TruncatedMainInversion, 0.0}};
}

double
unit_average_power (const FamilySpec &family, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
                    int nodes)
{
  switch (family.kind)
    {
    case FamilyKind::Constant:
      return 1.0;
    case FamilyKind::FullInversion:
      {
        const auto m = inverse_min_moment (dist_m, dist_e, nodes);
        if (!m)
          {
            throw NonInvertibleChannel ("non-invertible channel: E[1/min(h_m,h_e)] diverges for "
                                        + dist_m.to_string () + " / " + dist_e.to_string ());
          }
        return *m;
      }
    case FamilyKind::MainInversion:
      {
        const auto m = inverse_moment (dist_m);
        if (!m)
          {
            throw NonInvertibleChannel ("non-invertible channel: E[1/h_m] diverges for " + dist_m.to_string ());
          }
        return *m;
      }
    case FamilyKind::TruncatedMainInversion:
      if (!(family.h_min > 0.0))
        {
          throw std::invalid_argument ("truncated inversion needs a positive cutoff to calibrate");
        }
      return truncated_inverse_moment (dist_m, family.h_min, nodes);
    }
  return 0.0;
}

PowerPolicy
calibrate (const FamilySpec &family, const FadingDistribution &dist_m, const FadingDistribution &dist_e,
           double p_bar, CsiMode csi, int nodes)
{
  if (!(p_bar >= 0.0) || !std::isfinite (p_bar))
    {
      throw std::invalid_argument ("average power must be finite and >= 0");
    }
  if (family.kind == FamilyKind::FullInversion && csi != CsiMode::Full)
    {
      throw CapabilityError ("full channel inversion is not available with main-channel CSI only");
    }
  const double unit = unit_average_power (family, dist_m, dist_e, nodes);
  if (!(unit > 0.0))
    {
      if (p_bar == 0.0)
        {
          return PowerPolicy (TruncatedMainInversion{0.0, family.h_min}, csi);
        }
      throw NonInvertibleChannel ("cannot meet the power constraint: truncated inversion with cutoff "
                                  + family.to_string () + " never transmits");
    }
  const double s = p_bar / unit;
  switch (family.kind)
    {
    case FamilyKind::Constant:
      return PowerPolicy (ConstantPower{s}, csi);
    case FamilyKind::FullInversion:
      return PowerPolicy (FullInversion{s}, csi);
    case FamilyKind::MainInversion:
      return PowerPolicy (MainInversion{s}, csi);
    case FamilyKind::TruncatedMainInversion:
      return PowerPolicy (TruncatedMainInversion{s, family.h_min}, csi);
    }
  return PowerPolicy (ConstantPower{0.0}, csi);
}

} // namespace dlsec
