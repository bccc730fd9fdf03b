#pragma once

// JSON and CSV serialisation of bound results, SNR sweeps and simulation
// reports. Numbers are written in shortest round-trip form so files parse
// back to the same doubles.

#include "dlsec/bounds.hpp"
#include "dlsec/protocol.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace dlsec {

inline constexpr const char *kBlockCsvHeader = "m,l,h_m,h_e,power,r_main,r_eve,r_s,r_s_prime,r_s_dprime,key_"
                                               "consumed,key_generated,data_delivered,insecure_bits,outage";
inline constexpr const char *kSweepCsvHeader = "snr_db,upper_full,lower_full,upper_main,lower_main,high_snr_limit";

nlohmann::json to_json (const PowerPolicy &policy);
nlohmann::json to_json (const BoundResult &result, bool with_bits = false);
nlohmann::json to_json (const HighSnrLimit &limit, bool with_bits = false);
nlohmann::json to_json (const BoundSet &set, bool with_bits = false);
nlohmann::json to_json (const SimConfig &config);
nlohmann::json to_json (const SimReport &report);

void write_block_csv (std::ostream &out, const SimReport &report);

struct SweepRow
{
  double snr_db;
  BoundSet bounds;
};

/// Header plus one row per grid point. With `with_bits`, the five rate
/// columns are repeated in bits with a `_bits` suffix.
void write_sweep_csv (std::ostream &out, const std::vector<SweepRow> &rows, bool with_bits = false);

/// Formats a double so it reads back exactly ("inf"/"-inf" for infinities).
std::string format_number (double v);

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column (const std::string &name) const;
  double number (std::size_t row, const std::string &name) const;
};

/// Minimal reader for the files written here (no quoting).
CsvTable read_csv (std::istream &in);

std::string summary_line (const SimReport &report);

} // namespace dlsec
