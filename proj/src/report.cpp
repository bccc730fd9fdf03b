#include "dlsec/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dlsec {

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

double
to_bits (double nats)
{
  return nats / std::numbers::ln2;
}

} // namespace

std::string
format_number (double v)
{
  if (std::isinf (v))
    {
      return v > 0 ? "inf" : "-inf";
    }
  char buf[64];
  const auto res = std::to_chars (buf, buf + sizeof (buf), v);
  return std::string (buf, res.ptr);
}

nlohmann::json
to_json (const PowerPolicy &policy)
{
  nlohmann::json j;
  j["family"] = policy.name ();
  j["csi"] = to_string (policy.csi ());
  std::visit (overloaded{
                  [&] (const ConstantPower &p) { j["power"] = p.power; },
                  [&] (const FullInversion &p) { j["c"] = p.c; },
                  [&] (const MainInversion &p) { j["c"] = p.c; },
                  [&] (const TruncatedMainInversion &p) {
                    j["c"] = p.c;
                    j["h_min"] = p.h_min;
                  },
              },
              policy.family ());
  return j;
}

nlohmann::json
to_json (const BoundResult &result, bool with_bits)
{
  nlohmann::json j;
  j["value"] = result.value;
  if (with_bits)
    {
      j["value_bits"] = to_bits (result.value);
    }
  j["policy"] = to_json (result.policy);
  j["binding"] = result.binding;
  j["certified"] = result.certified;
  j["diagnostics"] = result.diagnostics;
  j["warnings"] = result.warnings;
  return j;
}

nlohmann::json
to_json (const HighSnrLimit &limit, bool with_bits)
{
  nlohmann::json j;
  j["value"] = limit.value;
  if (with_bits)
    {
      j["value_bits"] = to_bits (limit.value);
    }
  j["invertible"] = limit.invertible;
  j["inverse_min_moment"] = limit.inverse_min_moment ? nlohmann::json (*limit.inverse_min_moment)
                                                     : nlohmann::json ("divergent");
  return j;
}

nlohmann::json
to_json (const BoundSet &set, bool with_bits)
{
  nlohmann::json j;
  j["p_bar"] = set.p_bar;
  const double db = linear_to_db (set.p_bar);
  j["pbar_db"] = std::isinf (db) ? nlohmann::json ("-inf") : nlohmann::json (db);
  j["units"] = "nats";
  j["upper_full"] = to_json (set.upper_full, with_bits);
  j["lower_full"] = to_json (set.lower_full, with_bits);
  j["upper_main"] = to_json (set.upper_main, with_bits);
  j["lower_main"] = to_json (set.lower_main, with_bits);
  j["high_snr_limit"] = to_json (set.limit, with_bits);
  return j;
}

nlohmann::json
to_json (const SimConfig &c)
{
  nlohmann::json j;
  j["b"] = c.super_blocks;
  j["a"] = c.blocks_per_super_block;
  j["n1"] = c.symbols_per_block;
  j["p_bar"] = c.p_bar;
  j["scheme"] = to_string (c.scheme);
  j["policy"] = c.effective_policy ().to_string ();
  j["dist_m"] = c.dist_m.to_string ();
  j["dist_e"] = c.dist_e.to_string ();
  j["backoff"] = c.backoff;
  j["seed"] = c.seed.seed;
  j["stream"] = c.seed.stream;
  j["init"] = to_string (c.init);
  j["key_release"] = to_string (c.effective_key_release ());
  j["kappa"] = c.kappa;
  return j;
}

nlohmann::json
to_json (const SimReport &r)
{
  nlohmann::json j;
  j["config"] = to_json (r.config);
  j["policy"] = to_json (r.policy);
  j["otp_rate"] = r.otp_rate;
  j["scheme_rate"] = r.scheme_rate;
  j["starvation_events"] = r.starvation_events;
  j["insecure_fraction"] = r.insecure_fraction;
  j["otp_insecure_fraction"] = r.otp_insecure_fraction;
  j["outage_fraction"] = r.outage_fraction;
  j["min_secure_rate"] = r.min_secure_rate;
  j["min_secure_rate_after_first"] = r.min_secure_rate_after_first;
  j["roundtrip_ok"] = r.roundtrip_ok;
  j["key_balance_ok"] = key_balance_check (r);
  j["key_generated_per_super_block"] = r.key_generated_per_super_block;
  j["key_consumed_per_super_block"] = r.key_consumed_per_super_block;
  j["available_trajectory"] = r.available_trajectory;
  j["pending_trajectory"] = r.pending_trajectory;

  auto records = nlohmann::json::array ();
  for (const auto &rec : r.records)
    {
      records.push_back ({{"m", rec.m},
                          {"l", rec.l},
                          {"h_m", rec.state.h_m},
                          {"h_e", rec.state.h_e},
                          {"power", rec.power},
                          {"r_main", rec.rates.r_main},
                          {"r_eve", rec.rates.r_eve},
                          {"r_s", rec.rates.r_s},
                          {"r_s_prime", rec.rates.r_s_prime},
                          {"r_s_dprime", rec.rates.r_s_dprime},
                          {"r_o", rec.rates.r_o},
                          {"key_consumed", rec.key_consumed},
                          {"key_generated", rec.key_generated},
                          {"data_delivered", rec.data_delivered},
                          {"insecure_bits", rec.insecure_bits},
                          {"starved", rec.starved},
                          {"outage", rec.outage}});
    }
  j["records"] = std::move (records);
  return j;
}

void
write_block_csv (std::ostream &out, const SimReport &report)
{
  out << kBlockCsvHeader << '\n';
  for (const auto &r : report.records)
    {
      out << r.m << ',' << r.l << ',' << format_number (r.state.h_m) << ',' << format_number (r.state.h_e) << ','
          << format_number (r.power) << ',' << format_number (r.rates.r_main) << ','
          << format_number (r.rates.r_eve) << ',' << format_number (r.rates.r_s) << ','
          << format_number (r.rates.r_s_prime) << ',' << format_number (r.rates.r_s_dprime) << ','
          << r.key_consumed << ',' << r.key_generated << ',' << r.data_delivered << ',' << r.insecure_bits << ','
          << (r.outage ? 1 : 0) << '\n';
    }
}

void
write_sweep_csv (std::ostream &out, const std::vector<SweepRow> &rows, bool with_bits)
{
  out << kSweepCsvHeader;
  if (with_bits)
    {
      out << ",upper_full_bits,lower_full_bits,upper_main_bits,lower_main_bits,high_snr_limit_bits";
    }
  out << '\n';
  for (const auto &row : rows)
    {
      const double v[] = {row.bounds.upper_full.value, row.bounds.lower_full.value, row.bounds.upper_main.value,
                          row.bounds.lower_main.value, row.bounds.limit.value};
      out << format_number (row.snr_db);
      for (double x : v)
        {
          out << ',' << format_number (x);
        }
      if (with_bits)
        {
          for (double x : v)
            {
              out << ',' << format_number (to_bits (x));
            }
        }
      out << '\n';
    }
}

std::size_t
CsvTable::column (const std::string &name) const
{
  for (std::size_t i = 0; i < header.size (); ++i)
    {
      if (header[i] == name)
        {
          return i;
        }
    }
  throw std::out_of_range ("no CSV column '" + name + "'");
}

double
CsvTable::number (std::size_t row, const std::string &name) const
{
  const auto &cell = rows.at (row).at (column (name));
  if (cell == "inf")
    {
      return std::numeric_limits<double>::infinity ();
    }
  if (cell == "-inf")
    {
      return -std::numeric_limits<double>::infinity ();
    }
  double v = 0.0;
  const auto res = std::from_chars (cell.data (), cell.data () + cell.size (), v);
  if (res.ec != std::errc () || res.ptr != cell.data () + cell.size ())
    {
      throw std::invalid_argument ("bad CSV number '" + cell + "'");
    }
  return v;
}

CsvTable
read_csv (std::istream &in)
{
  const auto split = [] (const std::string &line) {
    std::vector<std::string> cells;
    std::stringstream ss (line);
    std::string cell;
    while (std::getline (ss, cell, ','))
      {
        cells.push_back (cell);
      }
    return cells;
  };
  CsvTable table;
  std::string line;
  if (!std::getline (in, line))
    {
      throw std::invalid_argument ("empty CSV");
    }
  table.header = split (line);
  while (std::getline (in, line))
    {
      if (line.empty ())
        {
          continue;
        }
      auto cells = split (line);
      if (cells.size () != table.header.size ())
        {
          throw std::invalid_argument ("CSV row width does not match header");
        }
      table.rows.push_back (std::move (cells));
    }
  return table;
}

std::string
summary_line (const SimReport &r)
{
  std::ostringstream os;
  os << "starvation=" << r.starvation_events << " insecure_frac=" << format_number (r.insecure_fraction)
     << " outage_frac=" << format_number (r.outage_fraction) << " roundtrip=" << (r.roundtrip_ok ? "ok" : "FAIL");
  return os.str ();
}

} // namespace dlsec
