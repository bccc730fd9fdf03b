#include "dlsec/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dlsec {

namespace {

constexpr std::size_t kWordBits = 64;

std::uint64_t
low_mask (unsigned count)
{
  return count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
}

} // namespace

BitString::BitString (std::size_t bits) : m_words ((bits + kWordBits - 1) / kWordBits, 0), m_size (bits)
{
}

BitString
BitString::from_string (std::string_view bits)
{
  BitString out (bits.size ());
  for (std::size_t i = 0; i < bits.size (); ++i)
    {
      if (bits[i] != '0' && bits[i] != '1')
        {
          throw std::invalid_argument ("bit string may only contain 0 and 1");
        }
      out.set (i, bits[i] == '1');
    }
  return out;
}

BitString
BitString::random (std::size_t bits, Engine &engine)
{
  BitString out (bits);
  for (auto &w : out.m_words)
    {
      w = engine ();
    }
  if (const auto tail = bits % kWordBits; tail != 0)
    {
      out.m_words.back () &= low_mask (static_cast<unsigned> (tail));
    }
  return out;
}

bool
BitString::test (std::size_t i) const
{
  return (m_words[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void
BitString::set (std::size_t i, bool value)
{
  const auto bit = std::uint64_t{1} << (i % kWordBits);
  if (value)
    {
      m_words[i / kWordBits] |= bit;
    }
  else
    {
      m_words[i / kWordBits] &= ~bit;
    }
}

std::string
BitString::to_string () const
{
  std::string s (m_size, '0');
  for (std::size_t i = 0; i < m_size; ++i)
    {
      if (test (i))
        {
          s[i] = '1';
        }
    }
  return s;
}

std::uint64_t
BitString::read_word (std::size_t offset, unsigned count) const
{
  const std::size_t idx = offset / kWordBits;
  const unsigned shift = offset % kWordBits;
  std::uint64_t v = m_words[idx] >> shift;
  if (shift != 0 && idx + 1 < m_words.size ())
    {
      v |= m_words[idx + 1] << (kWordBits - shift);
    }
  return v & low_mask (count);
}

void
BitString::append_word (std::uint64_t bits, unsigned count)
{
  if (count == 0)
    {
      return;
    }
  bits &= low_mask (count);
  const unsigned used = m_size % kWordBits;
  if (used == 0)
    {
      m_words.push_back (bits);
    }
  else
    {
      m_words.back () |= bits << used;
      if (used + count > kWordBits)
        {
          m_words.push_back (bits >> (kWordBits - used));
        }
    }
  m_size += count;
}

BitString
otp (const BitString &data, const BitString &key)
{
  if (data.size () != key.size ())
    {
      throw std::invalid_argument ("one-time pad needs data and key of equal length");
    }
  BitString out = data;
  auto &w = out.words ();
  const auto &k = key.words ();
  for (std::size_t i = 0; i < w.size (); ++i)
    {
      w[i] ^= k[i];
    }
  return out;
}

void
KeyBuffer::add_pending (BitString bits)
{
  m_pending_bits += bits.size ();
  m_pending.push_back (std::move (bits));
}

void
KeyBuffer::add_available (BitString bits)
{
  if (bits.empty ())
    {
      return;
    }
  m_available += bits.size ();
  m_chunks.push_back (std::move (bits));
}

void
KeyBuffer::release_pending ()
{
  for (auto &p : m_pending)
    {
      add_available (std::move (p));
    }
  m_pending.clear ();
  m_pending_bits = 0;
}

std::optional<BitString>
KeyBuffer::take (std::size_t bits)
{
  if (bits > m_available)
    {
      return std::nullopt;
    }
  BitString out;
  out.words ().reserve ((bits + kWordBits - 1) / kWordBits);
  std::size_t need = bits;
  while (need > 0)
    {
      const auto &front = m_chunks.front ();
      const std::size_t left = front.size () - m_front_offset;
      const std::size_t take_now = std::min (left, need);
      std::size_t copied = 0;
      while (copied < take_now)
        {
          const auto count = static_cast<unsigned> (std::min<std::size_t> (kWordBits, take_now - copied));
          out.append_word (front.read_word (m_front_offset + copied, count), count);
          copied += count;
        }
      need -= take_now;
      m_front_offset += take_now;
      if (m_front_offset == front.size ())
        {
          m_chunks.pop_front ();
          m_front_offset = 0;
        }
    }
  m_available -= bits;
  return out;
}

Scheme
parse_scheme (std::string_view text)
{
  if (text == "full")
    {
      return Scheme::FullCsi;
    }
  if (text == "main")
    {
      return Scheme::MainCsi;
    }
  if (text == "baseline")
    {
      return Scheme::BaselineWiretap;
    }
  throw std::invalid_argument ("scheme must be full, main or baseline");
}

InitMode
parse_init_mode (std::string_view text)
{
  if (text == "insecure")
    {
      return InitMode::InsecureCount;
    }
  if (text == "dedicated")
    {
      return InitMode::Dedicated;
    }
  throw std::invalid_argument ("init must be insecure or dedicated");
}

KeyRelease
parse_key_release (std::string_view text)
{
  if (text == "auto")
    {
      return KeyRelease::Automatic;
    }
  if (text == "block")
    {
      return KeyRelease::Block;
    }
  if (text == "superblock")
    {
      return KeyRelease::SuperBlock;
    }
  throw std::invalid_argument ("key release must be auto, block or superblock");
}

const char *
to_string (Scheme scheme)
{
  switch (scheme)
    {
    case Scheme::FullCsi:
      return "full";
    case Scheme::MainCsi:
      return "main";
    case Scheme::BaselineWiretap:
      return "baseline";
    }
  return "?";
}

const char *
to_string (InitMode mode)
{
  return mode == InitMode::InsecureCount ? "insecure" : "dedicated";
}

const char *
to_string (KeyRelease mode)
{
  switch (mode)
    {
    case KeyRelease::Automatic:
      return "auto";
    case KeyRelease::Block:
      return "block";
    case KeyRelease::SuperBlock:
      return "superblock";
    }
  return "?";
}

void
SimConfig::validate () const
{
  if (super_blocks < 1)
    {
      throw std::invalid_argument ("super-block count b must be >= 1");
    }
  if (blocks_per_super_block < 1)
    {
      throw std::invalid_argument ("blocks per super-block a must be >= 1");
    }
  if (symbols_per_block < 1)
    {
      throw std::invalid_argument ("symbols per block n1 must be >= 1");
    }
  if (!(p_bar >= 0.0) || !std::isfinite (p_bar))
    {
      throw std::invalid_argument ("average power must be finite and >= 0");
    }
  if (!(backoff >= 0.0 && backoff < 1.0))
    {
      throw std::invalid_argument ("backoff must lie in [0, 1)");
    }
  if (!(kappa >= 0.0) || !std::isfinite (kappa))
    {
      throw std::invalid_argument ("kappa must be finite and >= 0");
    }
  if (scheme == Scheme::MainCsi && key_release == KeyRelease::Block)
    {
      throw std::invalid_argument ("main-CSI keys are only decodable at the end of a super-block");
    }
  if (scheme == Scheme::MainCsi && policy && !policy->main_only ())
    {
      throw std::invalid_argument ("main-CSI scheme needs a policy that reads h_m only");
    }
  if (policy && policy->kind == FamilyKind::TruncatedMainInversion && !(policy->h_min > 0.0))
    {
      throw std::invalid_argument ("simulation needs an explicit truncation cutoff (trunc-inv:<h_min>)");
    }
}

FamilySpec
SimConfig::effective_policy () const
{
  if (policy)
    {
      return *policy;
    }
  switch (scheme)
    {
    case Scheme::FullCsi:
      return {FamilyKind::FullInversion, 0.0};
    case Scheme::MainCsi:
      return {FamilyKind::MainInversion, 0.0};
    case Scheme::BaselineWiretap:
      break;
    }
  return {FamilyKind::Constant, 0.0};
}

KeyRelease
SimConfig::effective_key_release () const
{
  if (key_release != KeyRelease::Automatic)
    {
      return key_release;
    }
  return scheme == Scheme::FullCsi ? KeyRelease::Block : KeyRelease::SuperBlock;
}

std::uint64_t
rate_to_bits (double rate_nats, int symbols)
{
  if (!(rate_nats > 0.0))
    {
      return 0;
    }
  return static_cast<std::uint64_t> (std::llround (symbols * rate_nats / std::numbers::ln2));
}

namespace {

double
bits_to_rate (std::uint64_t bits, int symbols)
{
  return static_cast<double> (bits) * std::numbers::ln2 / symbols;
}

} // namespace

SimReport
simulate (const SimConfig &config)
{
  config.validate ();
  SimReport report;
  report.config = config;

  const auto family = config.effective_policy ();
  const CsiMode csi = config.scheme == Scheme::MainCsi ? CsiMode::Main : CsiMode::Full;
  report.policy = calibrate (family, config.dist_m, config.dist_e, config.p_bar, csi, config.nodes);
  const auto &policy = report.policy;
  const KeyShareRule q{config.kappa};
  const bool block_release = config.effective_key_release () == KeyRelease::Block;

  double main_rate = 0.0;
  switch (config.scheme)
    {
    case Scheme::FullCsi:
      {
        const double key_rate = expected_key_rate (policy, config.dist_m, config.dist_e, q, config.nodes);
        const double cap = otp_rate_cap (policy, config.dist_m, config.dist_e);
        report.scheme_rate = std::min (key_rate, cap);
        report.otp_rate = (1.0 - config.backoff) * report.scheme_rate;
        break;
      }
    case Scheme::MainCsi:
      {
        BoundOptions opts;
        opts.nodes = config.nodes;
        main_rate = lower_main_for_policy (policy, config.dist_m, config.dist_e, opts).value;
        report.scheme_rate = main_rate;
        report.otp_rate = (1.0 - config.backoff) * main_rate;
        break;
      }
    case Scheme::BaselineWiretap:
      break;
    }

  auto channel = make_engine (config.seed.substream (1));
  auto data_source = make_engine (config.seed.substream (2));
  auto key_source = make_engine (config.seed.substream (3));

  const int b = config.super_blocks;
  const int a = config.blocks_per_super_block;
  const int n1 = config.symbols_per_block;
  const std::uint64_t otp_bits = rate_to_bits (report.otp_rate, n1);

  report.records.reserve (static_cast<std::size_t> (a) * b);
  report.available_trajectory.reserve (static_cast<std::size_t> (a) * b);
  report.pending_trajectory.reserve (static_cast<std::size_t> (a) * b);
  report.key_generated_per_super_block.assign (b, 0);
  report.key_consumed_per_super_block.assign (b, 0);

  KeyBuffer buffer;
  std::uint64_t delivered = 0;
  std::uint64_t insecure = 0;
  std::uint64_t otp_lane = 0;
  std::uint64_t otp_insecure = 0;
  std::uint64_t outages = 0;
  double min_rate = std::numeric_limits<double>::infinity ();
  double min_rate_later = std::numeric_limits<double>::infinity ();

  for (int m = 1; m <= b; ++m)
    {
      for (int l = 1; l <= a; ++l)
        {
          BlockRecord rec;
          rec.m = m;
          rec.l = l;
          rec.state = ChannelState{config.dist_m.draw (channel), config.dist_e.draw (channel)};
          rec.power = policy.power (rec.state);
          rec.rates = per_state_rates (policy, rec.state, q);
          std::uint64_t secure = 0;

          if (config.scheme == Scheme::BaselineWiretap)
            {
              rec.outage = rec.state.h_e >= rec.state.h_m;
              rec.data_delivered = rate_to_bits (rec.rates.r_s, n1);
              secure = rec.data_delivered;
              outages += rec.outage ? 1 : 0;
            }
          else
            {
              if (config.scheme == Scheme::MainCsi)
                {
                  // all secrecy goes to key; data rides the pad only
                  rec.rates.r_s_prime = positive_part (rec.rates.r_main - main_rate - rec.rates.r_eve);
                  rec.rates.r_s_dprime = 0.0;
                }
              rec.rates.r_o = report.otp_rate;

              if (m == 1)
                {
                  if (config.init == InitMode::InsecureCount)
                    {
                      rec.otp_lane_bits = otp_bits;
                      rec.insecure_bits = otp_bits;
                    }
                }
              else if (auto key = buffer.take (otp_bits))
                {
                  const auto data = BitString::random (otp_bits, data_source);
                  const auto cipher = otp (data, *key);
                  if (otp (cipher, *key) != data)
                    {
                      report.roundtrip_ok = false;
                    }
                  rec.key_consumed = otp_bits;
                  rec.otp_lane_bits = otp_bits;
                  secure += otp_bits;
                }
              else
                {
                  rec.starved = true;
                  ++report.starvation_events;
                }

              const std::uint64_t dprime_bits = rate_to_bits (rec.rates.r_s_dprime, n1);
              secure += dprime_bits;
              rec.data_delivered = rec.otp_lane_bits + dprime_bits;

              rec.key_generated = rate_to_bits (rec.rates.r_s_prime, n1);
              auto fresh = BitString::random (rec.key_generated, key_source);
              if (block_release)
                {
                  buffer.add_available (std::move (fresh));
                }
              else
                {
                  buffer.add_pending (std::move (fresh));
                }
            }

          delivered += rec.data_delivered;
          insecure += rec.insecure_bits;
          otp_lane += rec.otp_lane_bits;
          otp_insecure += rec.insecure_bits;
          report.key_generated_per_super_block[m - 1] += rec.key_generated;
          report.key_consumed_per_super_block[m - 1] += rec.key_consumed;

          const double secure_rate = bits_to_rate (secure, n1);
          min_rate = std::min (min_rate, secure_rate);
          if (m > 1)
            {
              min_rate_later = std::min (min_rate_later, secure_rate);
            }

          report.available_trajectory.push_back (buffer.available ());
          report.pending_trajectory.push_back (buffer.pending ());
          report.records.push_back (rec);
        }
      buffer.release_pending ();
    }

  const auto total_blocks = static_cast<double> (report.records.size ());
  report.insecure_fraction = delivered > 0 ? static_cast<double> (insecure) / static_cast<double> (delivered) : 0.0;
  report.otp_insecure_fraction
      = otp_lane > 0 ? static_cast<double> (otp_insecure) / static_cast<double> (otp_lane) : 0.0;
  report.outage_fraction = static_cast<double> (outages) / total_blocks;
  report.min_secure_rate = min_rate;
  report.min_secure_rate_after_first = std::isinf (min_rate_later) ? 0.0 : min_rate_later;
  return report;
}

bool
key_balance_check (const SimReport &report)
{
  const auto &gen = report.key_generated_per_super_block;
  const auto &used = report.key_consumed_per_super_block;
  if (report.records.empty () || gen.empty () || gen.size () != used.size ())
    {
      throw std::invalid_argument ("key_balance_check needs a completed, non-empty report");
    }
  for (std::size_t m = 1; m < gen.size (); ++m)
    {
      if (used[m] > gen[m - 1])
        {
          return false;
        }
    }
  return true;
}

} // namespace dlsec
