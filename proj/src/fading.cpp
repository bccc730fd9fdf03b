#include "dlsec/fading.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace dlsec {

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

double
parse_number (std::string_view text, std::string_view spec)
{
  std::string s (text);
  char *end = nullptr;
  const double v = std::strtod (s.c_str (), &end);
  if (s.empty () || end != s.c_str () + s.size () || !std::isfinite (v))
    {
      throw std::invalid_argument ("bad number '" + s + "' in distribution spec '" + std::string (spec) + "'");
    }
  return v;
}

std::vector<std::string_view>
split (std::string_view text, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true)
    {
      const auto pos = text.find (sep, start);
      parts.push_back (text.substr (start, pos - start));
      if (pos == std::string_view::npos)
        {
          break;
        }
      start = pos + 1;
    }
  return parts;
}

} // namespace

FadingDistribution::FadingDistribution (Kind kind) : m_kind (kind)
{
  std::visit (overloaded{
                  [this] (const ChiSquare &k) {
                    if (k.dof < 1 || !(k.scale > 0.0) || !std::isfinite (k.scale))
                      {
                        throw std::invalid_argument ("chi-square needs dof >= 1 and scale > 0");
                      }
                    m_shape = 0.5 * k.dof;
                    m_scale = 2.0 * k.scale;
                  },
                  [this] (const GammaLaw &k) {
                    if (!(k.shape > 0.0) || !(k.scale > 0.0) || !std::isfinite (k.shape) || !std::isfinite (k.scale))
                      {
                        throw std::invalid_argument ("gamma needs shape > 0 and scale > 0");
                      }
                    m_shape = k.shape;
                    m_scale = k.scale;
                  },
                  [this] (const Exponential &k) {
                    if (!(k.mean > 0.0) || !std::isfinite (k.mean))
                      {
                        throw std::invalid_argument ("exponential needs mean > 0");
                      }
                    m_shape = 1.0;
                    m_scale = k.mean;
                  },
                  [] (const Degenerate &k) {
                    if (!(k.value > 0.0) || !std::isfinite (k.value))
                      {
                        throw std::invalid_argument ("degenerate gain must be positive and finite");
                      }
                  },
              },
              m_kind);
  if (!is_degenerate ())
    {
      m_log_norm = -std::lgamma (m_shape) - m_shape * std::log (m_scale);
    }
}

FadingDistribution
FadingDistribution::parse (std::string_view spec)
{
  std::string lower (spec);
  std::transform (lower.begin (), lower.end (), lower.begin (),
                  [] (unsigned char c) { return static_cast<char> (std::tolower (c)); });
  const auto parts = split (lower, ':');
  const auto name = parts.front ();
  const auto bad = [&] () {
    return std::invalid_argument ("unrecognised distribution spec '" + std::string (spec)
                                  + "' (expected chisq:k[:scale], gamma:shape:scale, exp:mean, const:value)");
  };
  if (name == "chisq" || name == "chi2")
    {
      if (parts.size () != 2 && parts.size () != 3)
        {
          throw bad ();
        }
      const double dof = parse_number (parts[1], spec);
      if (dof != std::floor (dof) || dof < 1 || dof > 1e6)
        {
          throw std::invalid_argument ("chi-square dof must be a positive integer");
        }
      const double scale = parts.size () == 3 ? parse_number (parts[2], spec) : 1.0;
      return FadingDistribution (ChiSquare{static_cast<int> (dof), scale});
    }
  if (name == "gamma")
    {
      if (parts.size () != 3)
        {
          throw bad ();
        }
      return FadingDistribution (GammaLaw{parse_number (parts[1], spec), parse_number (parts[2], spec)});
    }
  if (name == "exp")
    {
      if (parts.size () != 2)
        {
          throw bad ();
        }
      return FadingDistribution (Exponential{parse_number (parts[1], spec)});
    }
  if (name == "const")
    {
      if (parts.size () != 2)
        {
          throw bad ();
        }
      return FadingDistribution (Degenerate{parse_number (parts[1], spec)});
    }
  throw bad ();
}

std::string
FadingDistribution::to_string () const
{
  std::ostringstream os;
  os.precision (17);
  std::visit (overloaded{
                  [&] (const ChiSquare &k) {
                    os << "chisq:" << k.dof;
                    if (k.scale != 1.0)
                      {
                        os << ':' << k.scale;
                      }
                  },
                  [&] (const GammaLaw &k) { os << "gamma:" << k.shape << ':' << k.scale; },
                  [&] (const Exponential &k) { os << "exp:" << k.mean; },
                  [&] (const Degenerate &k) { os << "const:" << k.value; },
              },
              m_kind);
  return os.str ();
}

double
FadingDistribution::point_value () const
{
  if (const auto *d = std::get_if<Degenerate> (&m_kind))
    {
      return d->value;
    }
  throw std::logic_error ("point_value on a continuous law");
}

Support
FadingDistribution::support () const
{
  if (is_degenerate ())
    {
      const double v = point_value ();
      return {v, v};
    }
  return {0.0, std::numeric_limits<double>::infinity ()};
}

double
FadingDistribution::mean () const
{
  return is_degenerate () ? point_value () : m_shape * m_scale;
}

double
FadingDistribution::pdf (double x) const
{
  if (!(x > 0.0))
    {
      throw std::invalid_argument ("pdf needs x > 0");
    }
  if (is_degenerate ())
    {
      throw std::domain_error ("not absolutely continuous: degenerate law has no density");
    }
  if (std::isinf (x))
    {
      return 0.0;
    }
  return std::exp (m_log_norm + (m_shape - 1.0) * std::log (x) - x / m_scale);
}

double
FadingDistribution::draw (Engine &engine) const
{
  return std::visit (overloaded{
                         [&] (const ChiSquare &k) {
                           std::chi_squared_distribution<double> d (k.dof);
                           return k.scale * d (engine);
                         },
                         [&] (const GammaLaw &k) {
                           std::gamma_distribution<double> d (k.shape, k.scale);
                           return d (engine);
                         },
                         [&] (const Exponential &k) {
                           std::exponential_distribution<double> d (1.0 / k.mean);
                           return d (engine);
                         },
                         [] (const Degenerate &k) { return k.value; },
                     },
                     m_kind);
}

double
pdf (const FadingDistribution &dist, double x)
{
  return dist.pdf (x);
}

std::vector<double>
sample (const FadingDistribution &dist, const RngSeed &seed, std::size_t n)
{
  auto engine = make_engine (seed);
  std::vector<double> out (n);
  for (auto &v : out)
    {
      v = dist.draw (engine);
    }
  return out;
}

std::optional<double>
inverse_moment (const FadingDistribution &dist)
{
  if (dist.is_degenerate ())
    {
      return 1.0 / dist.point_value ();
    }
  // density ~ x^(k-1) at 0: E[1/X] finite iff k - 1 > 0
  const double k = dist.gamma_shape ();
  if (k <= 1.0)
    {
      return std::nullopt;
    }
  return 1.0 / ((k - 1.0) * dist.gamma_scale ());
}

std::optional<double>
inverse_min_moment (const FadingDistribution &dist_m, const FadingDistribution &dist_e, int nodes)
{
  // The min has a density ~ x^(k-1) at 0 for the smallest continuous shape k,
  // so finiteness reduces to each continuous coordinate's inverse moment.
  if (!inverse_moment (dist_m) || !inverse_moment (dist_e))
    {
      return std::nullopt;
    }
  QuadratureGrid outer;
  QuadratureGrid inner;
  expectation_grid (dist_m, {}, nodes, outer);
  double sum = 0.0;
  for (std::size_t i = 0; i < outer.size (); ++i)
    {
      const double hm = outer.x[i];
      const double brk[] = {hm};
      expectation_grid (dist_e, brk, nodes, inner);
      double acc = 0.0;
      for (std::size_t j = 0; j < inner.size (); ++j)
        {
          acc += inner.w[j] / std::min (hm, inner.x[j]);
        }
      sum += outer.w[i] * acc;
    }
  return sum;
}

double
truncated_inverse_moment (const FadingDistribution &dist, double cutoff, int nodes)
{
  if (!(cutoff > 0.0))
    {
      throw std::invalid_argument ("truncation cutoff must be positive");
    }
  if (dist.is_degenerate ())
    {
      const double v = dist.point_value ();
      return v >= cutoff ? 1.0 / v : 0.0;
    }
  return integrate_tail ([&] (double x) { return dist.pdf (x) / x; }, cutoff, nodes);
}

bool
has_mass_below (const FadingDistribution &dist, double x)
{
  return dist.is_degenerate () ? dist.point_value () < x : x > 0.0;
}

void
expectation_grid (const FadingDistribution &dist, std::span<const double> breaks, int nodes, QuadratureGrid &out)
{
  if (dist.is_degenerate ())
    {
      out.x.assign (1, dist.point_value ());
      out.w.assign (1, 1.0);
      return;
    }
  halfline_grid (breaks, nodes, out);
  for (std::size_t i = 0; i < out.size (); ++i)
    {
      out.w[i] *= dist.pdf (out.x[i]);
    }
}

} // namespace dlsec
