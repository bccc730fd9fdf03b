#include "cli.hpp"

#include "dlsec/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace dlsec::cli {

namespace {

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string
trim (std::string s)
{
  const auto first = s.find_first_not_of (" \t\r");
  if (first == std::string::npos)
    {
      return {};
    }
  const auto last = s.find_last_not_of (" \t\r");
  return s.substr (first, last - first + 1);
}

double
parse_double (const std::string &text, const std::string &what)
{
  const std::string t = trim (text);
  if (t == "-inf" || t == "-Inf" || t == "-INF")
    {
      return -std::numeric_limits<double>::infinity ();
    }
  char *end = nullptr;
  const double v = std::strtod (t.c_str (), &end);
  if (t.empty () || end != t.c_str () + t.size () || std::isnan (v))
    {
      throw UsageError ("bad number for " + what + ": '" + text + "'");
    }
  return v;
}

std::uint64_t
default_seed ()
{
  if (const char *env = std::getenv ("DST_SEED"))
    {
      try
        {
          return std::stoull (env);
        }
      catch (const std::exception &)
        {
          throw UsageError (std::string ("DST_SEED is not an unsigned integer: '") + env + "'");
        }
    }
  return 1;
}

/// `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>>
read_config_file (const std::string &path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw UsageError ("cannot open config file '" + path + "'");
    }
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline (in, line))
    {
      ++lineno;
      if (const auto hash = line.find ('#'); hash != std::string::npos)
        {
          line.resize (hash);
        }
      line = trim (line);
      if (line.empty ())
        {
          continue;
        }
      const auto eq = line.find ('=');
      if (eq == std::string::npos)
        {
          throw UsageError (path + ":" + std::to_string (lineno) + ": expected 'key = value'");
        }
      entries.emplace_back (trim (line.substr (0, eq)), trim (line.substr (eq + 1)));
    }
  return entries;
}

/// CLI11 reads "-inf" as a short flag; glue it to the preceding option.
std::vector<std::string>
join_negative_values (const std::vector<std::string> &args)
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size (); ++i)
    {
      if (i + 1 < args.size () && args[i].rfind ("--", 0) == 0 && args[i].find ('=') == std::string::npos
          && args[i + 1].size () > 1 && args[i + 1][0] == '-'
          && (std::isdigit (static_cast<unsigned char> (args[i + 1][1])) || args[i + 1][1] == '.'
              || args[i + 1].rfind ("-inf", 0) == 0 || args[i + 1].rfind ("-Inf", 0) == 0))
        {
          out.push_back (args[i] + "=" + args[i + 1]);
          ++i;
        }
      else
        {
          out.push_back (args[i]);
        }
    }
  return out;
}

struct ModelArgs
{
  std::string dist_m = "chisq:4";
  std::string dist_e = "chisq:4";
  std::optional<std::string> pbar_db;
  std::optional<double> pbar;
  std::optional<std::string> policy;
  std::optional<double> kappa;
  int nodes = kDefaultNodes;
  bool bits = false;

  void add_to (CLI::App &app, bool with_power)
  {
    app.add_option ("--dist-m", dist_m, "main-channel gain law (chisq:4, gamma:2:1, exp:1, const:2.5)");
    app.add_option ("--dist-e", dist_e, "eavesdropper gain law");
    if (with_power)
      {
        app.add_option ("--pbar-db", pbar_db, "average power in dB (10 log10 P); -inf for zero");
        app.add_option ("--pbar", pbar, "average power, linear");
      }
    app.add_option ("--policy", policy, "comma list of const, full-inv, main-inv, trunc-inv[:h_min]");
    app.add_option ("--kappa", kappa, "fix q(h) = max(h_e, kappa) instead of searching");
    app.add_option ("--nodes", nodes, "Gauss-Legendre nodes per dimension and piece")->check (CLI::Range (8, 4000));
    app.add_flag ("--bits", bits, "also report rates in bits");
  }

  double power () const
  {
    if (pbar && pbar_db)
      {
        throw UsageError ("give either --pbar or --pbar-db, not both");
      }
    double p = 100.0;
    if (pbar)
      {
        p = *pbar;
      }
    else if (pbar_db)
      {
        p = db_to_linear (parse_double (*pbar_db, "--pbar-db"));
      }
    if (!(p >= 0.0) || !std::isfinite (p))
      {
        throw UsageError ("average power must be finite and >= 0");
      }
    return p;
  }

  std::vector<FamilySpec> menu () const { return policy ? parse_family_menu (*policy) : default_menu (); }

  BoundOptions bound_options () const
  {
    BoundOptions o;
    o.nodes = nodes;
    if (kappa)
      {
        if (!(*kappa >= 0.0))
          {
            throw UsageError ("--kappa must be >= 0");
          }
        o.kappa = *kappa;
      }
    return o;
  }
};

/// An explicitly requested family that cannot be calibrated is a model error.
void
check_requested_families (const ModelArgs &m, const FadingDistribution &dm, const FadingDistribution &de)
{
  if (!m.policy)
    {
      return;
    }
  for (const auto &family : m.menu ())
    {
      if (family.kind == FamilyKind::TruncatedMainInversion && family.h_min <= 0.0)
        {
          continue;
        }
      unit_average_power (family, dm, de, m.nodes);
    }
}

std::vector<double>
parse_grid (const std::string &text)
{
  std::vector<double> grid;
  if (text.find (':') != std::string::npos)
    {
      std::vector<std::string> parts;
      std::stringstream ss (text);
      std::string p;
      while (std::getline (ss, p, ':'))
        {
          parts.push_back (p);
        }
      if (parts.size () != 3)
        {
          throw UsageError ("grid range must be start:stop:step");
        }
      const double start = parse_double (parts[0], "grid start");
      const double stop = parse_double (parts[1], "grid stop");
      const double step = parse_double (parts[2], "grid step");
      if (!(step > 0.0) || !(stop >= start) || !std::isfinite (start))
        {
          throw UsageError ("grid range needs step > 0 and stop >= start");
        }
      const auto count = static_cast<long> (std::floor ((stop - start) / step + 1e-9));
      for (long i = 0; i <= count; ++i)
        {
          grid.push_back (start + i * step);
        }
    }
  else
    {
      std::stringstream ss (text);
      std::string p;
      while (std::getline (ss, p, ','))
        {
          grid.push_back (parse_double (p, "grid point"));
        }
    }
  if (grid.empty ())
    {
      throw UsageError ("SNR grid is empty");
    }
  for (std::size_t i = 1; i < grid.size (); ++i)
    {
      if (!(grid[i] > grid[i - 1]))
        {
          throw UsageError ("SNR grid must be strictly ascending");
        }
    }
  return grid;
}

void
write_file (const std::string &path, const std::string &content)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw UsageError ("cannot write '" + path + "'");
    }
  out << content;
}

} // namespace

int
run (const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Delay-limited secrecy bounds and key-renewal protocol simulation"};
  app.name ("dlsec");
  app.require_subcommand (1);
  app.option_defaults ()->multi_option_policy (CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;

  // bounds
  ModelArgs bounds_args;
  auto *bounds = app.add_subcommand ("bounds", "print all four bounds and the high-SNR limit as JSON");
  bounds_args.add_to (*bounds, true);

  // sweep
  ModelArgs sweep_args;
  std::string grid_text = "0:40:5";
  std::string sweep_out;
  auto *sweep = app.add_subcommand ("sweep", "bounds over an SNR grid as CSV");
  sweep_args.add_to (*sweep, false);
  sweep->add_option ("--snr-db", grid_text, "start:stop:step or comma list (dB)");
  sweep->add_option ("--out", sweep_out, "CSV path (default stdout)");

  // simulate
  SimConfig sim;
  std::string scheme = "full", init = "insecure", release = "auto";
  std::string sim_dist_m = "chisq:4", sim_dist_e = "chisq:4";
  std::optional<std::string> sim_policy, sim_pbar_db;
  std::optional<double> sim_pbar;
  std::optional<std::uint64_t> seed;
  std::string json_path = "sim_report.json", csv_path = "sim_blocks.csv";
  auto *simulate_cmd = app.add_subcommand ("simulate", "run the block-level protocol simulator");
  simulate_cmd->add_option ("--scheme", scheme, "full | main | baseline");
  simulate_cmd->add_option ("-a,--blocks", sim.blocks_per_super_block, "blocks per super-block");
  simulate_cmd->add_option ("-b,--super-blocks", sim.super_blocks, "number of super-blocks");
  simulate_cmd->add_option ("--n1", sim.symbols_per_block, "symbols per block");
  simulate_cmd->add_option ("--pbar-db", sim_pbar_db, "average power in dB");
  simulate_cmd->add_option ("--pbar", sim_pbar, "average power, linear");
  simulate_cmd->add_option ("--policy", sim_policy, "const | full-inv | main-inv | trunc-inv:<h_min>");
  simulate_cmd->add_option ("--dist-m", sim_dist_m, "main-channel gain law");
  simulate_cmd->add_option ("--dist-e", sim_dist_e, "eavesdropper gain law");
  simulate_cmd->add_option ("--backoff", sim.backoff, "rate backoff delta in [0, 1)");
  simulate_cmd->add_option ("--seed", seed, "RNG seed (default $DST_SEED or 1)");
  simulate_cmd->add_option ("--stream", sim.seed.stream, "RNG stream");
  simulate_cmd->add_option ("--init", init, "insecure | dedicated");
  simulate_cmd->add_option ("--key-release", release, "auto | block | superblock");
  simulate_cmd->add_option ("--kappa", sim.kappa, "q(h) = max(h_e, kappa)");
  simulate_cmd->add_option ("--nodes", sim.nodes, "quadrature nodes")->check (CLI::Range (8, 4000));
  simulate_cmd->add_option ("--json", json_path, "report JSON path");
  simulate_cmd->add_option ("--csv", csv_path, "per-block CSV path");

  // validate
  ValidateOptions vopts;
  std::optional<std::uint64_t> vseed;
  auto *validate = app.add_subcommand ("validate", "check quadrature against Monte Carlo");
  validate->add_flag ("--quick", vopts.quick, "smaller suite");
  validate->add_option ("--dist", vopts.dist, "gain law for both channels");
  validate->add_option ("--seed", vseed, "RNG seed (default $DST_SEED or 1)");
  validate->add_option ("--sigma", vopts.sigma, "tolerance in standard errors");
  validate->add_option ("--abs-tol", vopts.abs_tol, "absolute tolerance added to the sigma band");

  for (auto *sub : {bounds, sweep, simulate_cmd, validate})
    {
      sub->add_option ("--config", config_path, "file of 'key = value' lines; flags override it");
    }

  try
    {
      // config file entries go first so command-line flags take the last word
      auto args = join_negative_values (raw_args);
      std::string config_file;
      for (std::size_t i = 0; i < args.size (); ++i)
        {
          if (args[i] == "--config" && i + 1 < args.size ())
            {
              config_file = args[i + 1];
            }
          else if (args[i].rfind ("--config=", 0) == 0)
            {
              config_file = args[i].substr (9);
            }
        }
      if (!config_file.empty () && !args.empty ())
        {
          CLI::App *target = nullptr;
          for (auto *sub : app.get_subcommands ({}))
            {
              if (sub->get_name () == args.front ())
                {
                  target = sub;
                }
            }
          if (target == nullptr)
            {
              throw UsageError ("--config needs a subcommand first");
            }
          std::vector<std::string> from_file;
          for (const auto &[key, value] : read_config_file (config_file))
            {
              if (key == "config" || target->get_option_no_throw ("--" + key) == nullptr)
                {
                  throw UsageError ("unknown config key '" + key + "' for " + target->get_name ());
                }
              from_file.push_back ("--" + key + "=" + value);
            }
          args.insert (args.begin () + 1, from_file.begin (), from_file.end ());
        }

      std::vector<std::string> reversed (args.rbegin (), args.rend ());
      app.parse (reversed);

      if (bounds->parsed ())
        {
          const auto dm = FadingDistribution::parse (bounds_args.dist_m);
          const auto de = FadingDistribution::parse (bounds_args.dist_e);
          const double p = bounds_args.power ();
          check_requested_families (bounds_args, dm, de);
          const auto set = compute_bounds (dm, de, p, bounds_args.menu (), bounds_args.bound_options ());
          auto j = to_json (set, bounds_args.bits);
          j["dist_m"] = dm.to_string ();
          j["dist_e"] = de.to_string ();
          out << j.dump (2) << '\n';
          return kOk;
        }

      if (sweep->parsed ())
        {
          const auto dm = FadingDistribution::parse (sweep_args.dist_m);
          const auto de = FadingDistribution::parse (sweep_args.dist_e);
          const auto grid = parse_grid (grid_text);
          check_requested_families (sweep_args, dm, de);
          const auto menu = sweep_args.menu ();
          const auto opts = sweep_args.bound_options ();
          std::vector<SweepRow> rows;
          const auto limit = high_snr_limit (dm, de, opts.nodes);
          for (double db : grid)
            {
              SweepRow row{db, {}};
              const double p = db_to_linear (db);
              row.bounds.p_bar = p;
              row.bounds.upper_full = upper_full (dm, de, p, menu, opts);
              row.bounds.lower_full = lower_full (dm, de, p, menu, opts);
              row.bounds.upper_main = upper_main (dm, de, p, menu, opts);
              row.bounds.lower_main = lower_main (dm, de, p, menu, opts);
              row.bounds.limit = limit;
              rows.push_back (std::move (row));
            }
          std::ostringstream csv;
          write_sweep_csv (csv, rows, sweep_args.bits);
          if (sweep_out.empty ())
            {
              out << csv.str ();
            }
          else
            {
              write_file (sweep_out, csv.str ());
            }
          return kOk;
        }

      if (simulate_cmd->parsed ())
        {
          sim.scheme = parse_scheme (scheme);
          sim.init = parse_init_mode (init);
          sim.key_release = parse_key_release (release);
          sim.dist_m = FadingDistribution::parse (sim_dist_m);
          sim.dist_e = FadingDistribution::parse (sim_dist_e);
          if (sim_policy)
            {
              sim.policy = FamilySpec::parse (*sim_policy);
            }
          if (sim_pbar && sim_pbar_db)
            {
              throw UsageError ("give either --pbar or --pbar-db, not both");
            }
          if (sim_pbar)
            {
              sim.p_bar = *sim_pbar;
            }
          else if (sim_pbar_db)
            {
              sim.p_bar = db_to_linear (parse_double (*sim_pbar_db, "--pbar-db"));
            }
          sim.seed.seed = seed ? *seed : default_seed ();
          sim.validate ();
          const auto report = dlsec::simulate (sim);
          write_file (json_path, to_json (report).dump (2) + "\n");
          std::ostringstream csv;
          write_block_csv (csv, report);
          write_file (csv_path, csv.str ());
          out << summary_line (report) << '\n';
          return kOk;
        }

      if (validate->parsed ())
        {
          vopts.seed = vseed ? *vseed : default_seed ();
          const auto results = run_validation (vopts);
          std::vector<std::string> failed;
          for (const auto &r : results)
            {
              out << (r.pass ? "PASS " : "FAIL ") << r.name << " quad=" << format_number (r.quadrature)
                  << " mc=" << format_number (r.monte_carlo) << " stderr=" << format_number (r.std_error)
                  << " tol=" << format_number (r.tolerance) << '\n';
              if (!r.pass)
                {
                  failed.push_back (r.name);
                }
            }
          if (!failed.empty ())
            {
              err << "validation failed for:\n";
              for (const auto &f : failed)
                {
                  err << "  " << f << '\n';
                }
              return kValidationFailed;
            }
          return kOk;
        }
    }
  catch (const CLI::CallForHelp &)
    {
      out << app.help ();
      return kOk;
    }
  catch (const CLI::ParseError &e)
    {
      err << "error: " << e.what () << '\n';
      return kUsage;
    }
  catch (const NonInvertibleChannel &e)
    {
      err << "error: " << e.what () << '\n';
      return kInfeasible;
    }
  catch (const CapabilityError &e)
    {
      err << "error: " << e.what () << '\n';
      return kInfeasible;
    }
  catch (const UsageError &e)
    {
      err << "error: " << e.what () << '\n';
      return kUsage;
    }
  catch (const std::invalid_argument &e)
    {
      err << "error: " << e.what () << '\n';
      return kUsage;
    }
  return kUsage;
}

} // namespace dlsec::cli
