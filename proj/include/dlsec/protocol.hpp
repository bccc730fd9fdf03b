#pragma once

// Block-level simulator of the two-stage scheme: data packets are one-time-pad
// encrypted with key bits generated in earlier blocks, while fresh key bits
// are carried on the secrecy rate of the current block. A naive per-block
// wiretap baseline shows the secrecy outage the scheme removes.

#include "dlsec/bounds.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dlsec {

/// Packed bit sequence. Bits past size() in the last word are always zero.
class BitString
{
public:
  BitString () = default;
  explicit BitString (std::size_t bits);

  static BitString from_string (std::string_view bits);
  static BitString random (std::size_t bits, Engine &engine);

  std::size_t size () const { return m_size; }
  bool empty () const { return m_size == 0; }
  bool test (std::size_t i) const;
  void set (std::size_t i, bool value);
  std::string to_string () const;

  /// Up to 64 bits starting at offset, little-endian within the word.
  std::uint64_t read_word (std::size_t offset, unsigned count) const;
  /// Appends the low `count` bits of `bits`.
  void append_word (std::uint64_t bits, unsigned count);

  const std::vector<std::uint64_t> &words () const { return m_words; }
  std::vector<std::uint64_t> &words () { return m_words; }

  friend bool operator== (const BitString &, const BitString &) = default;

private:
  std::vector<std::uint64_t> m_words;
  std::size_t m_size = 0;
};

/// Bitwise XOR of equal-length sequences. otp(otp(d, k), k) == d.
BitString otp (const BitString &data, const BitString &key);

/// Key material: `pending` bits are not yet decodable by the receiver,
/// `available` bits can be consumed as pad, oldest first.
class KeyBuffer
{
public:
  void add_pending (BitString bits);
  void add_available (BitString bits);
  /// Moves every pending bit to the available pool.
  void release_pending ();
  /// Removes and returns the oldest `bits` available bits, or nothing if fewer exist.
  std::optional<BitString> take (std::size_t bits);

  std::size_t available () const { return m_available; }
  std::size_t pending () const { return m_pending_bits; }

private:
  std::deque<BitString> m_chunks;
  std::size_t m_front_offset = 0;
  std::size_t m_available = 0;
  std::vector<BitString> m_pending;
  std::size_t m_pending_bits = 0;
};

enum class Scheme
{
  FullCsi,
  MainCsi,
  BaselineWiretap
};

enum class InitMode
{
  /// Super-block 1 sends its pad-lane data unencrypted and counts it insecure.
  InsecureCount,
  /// Super-block 1 only builds up key; no pad-lane data is sent.
  Dedicated
};

enum class KeyRelease
{
  /// Block for full CSI, super-block for main CSI.
  Automatic,
  /// Key bits are usable from the block after they were sent.
  Block,
  /// Key bits are usable from the next super-block on.
  SuperBlock
};

Scheme parse_scheme (std::string_view text);
InitMode parse_init_mode (std::string_view text);
KeyRelease parse_key_release (std::string_view text);
const char *to_string (Scheme scheme);
const char *to_string (InitMode mode);
const char *to_string (KeyRelease mode);

struct SimConfig
{
  int super_blocks = 20;             ///< b
  int blocks_per_super_block = 500;  ///< a
  int symbols_per_block = 10'000;    ///< n1
  double p_bar = 100.0;
  Scheme scheme = Scheme::FullCsi;
  /// Empty: full-inv for FullCsi, main-inv for MainCsi, const for the baseline.
  std::optional<FamilySpec> policy;
  FadingDistribution dist_m{ChiSquare{4}};
  FadingDistribution dist_e{ChiSquare{4}};
  double backoff = 0.05;
  RngSeed seed{};
  InitMode init = InitMode::InsecureCount;
  KeyRelease key_release = KeyRelease::Automatic;
  double kappa = 0.0;
  int nodes = kDefaultNodes;

  /// Throws std::invalid_argument on a bad configuration.
  void validate () const;
  FamilySpec effective_policy () const;
  KeyRelease effective_key_release () const;
};

struct BlockRecord
{
  int m = 0;
  int l = 0;
  ChannelState state{0.0, 0.0};
  double power = 0.0;
  RateBreakdown rates;
  std::uint64_t key_consumed = 0;
  std::uint64_t key_generated = 0;
  std::uint64_t data_delivered = 0;
  /// Delivered without pad or wiretap protection.
  std::uint64_t insecure_bits = 0;
  /// Bits that went out on the pad lane (encrypted or not).
  std::uint64_t otp_lane_bits = 0;
  bool starved = false;
  bool outage = false;
};

struct SimReport
{
  SimConfig config;
  PowerPolicy policy{ConstantPower{0.0}, CsiMode::Full};
  /// Constant pad-lane rate (nats/use) after backoff; 0 for the baseline.
  double otp_rate = 0.0;
  /// E[R_s'] for full CSI, R* for main CSI (before backoff).
  double scheme_rate = 0.0;

  std::vector<BlockRecord> records;
  std::vector<std::uint64_t> available_trajectory;
  std::vector<std::uint64_t> pending_trajectory;
  std::vector<std::uint64_t> key_generated_per_super_block;
  std::vector<std::uint64_t> key_consumed_per_super_block;

  std::uint64_t starvation_events = 0;
  double insecure_fraction = 0.0;
  double otp_insecure_fraction = 0.0;
  double outage_fraction = 0.0;
  /// Smallest per-block secure rate (nats/use) over all blocks and over
  /// blocks after super-block 1.
  double min_secure_rate = 0.0;
  double min_secure_rate_after_first = 0.0;
  bool roundtrip_ok = true;
};

/// Rate (nats/use) to a whole number of bits in a block of n1 symbols.
std::uint64_t rate_to_bits (double rate_nats, int symbols);

SimReport simulate (const SimConfig &config);

/// True iff for every super-block m >= 2 the bits consumed in m do not exceed
/// the bits generated in m - 1. Throws on an empty report.
bool key_balance_check (const SimReport &report);

} // namespace dlsec
