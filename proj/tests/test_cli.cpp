#include "cli.hpp"
#include "dlsec/report.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace dlsec;

namespace {

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run
run_cli (std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = cli::run (args, out, err);
  return {code, out.str (), err.str ()};
}

std::string
slurp (const std::string &path)
{
  std::ifstream in (path, std::ios::binary);
  return {std::istreambuf_iterator<char> (in), {}};
}

} // namespace

TEST_CASE ("bounds")
{
  auto r = run_cli ({"bounds", "--dist-m", "chisq:4", "--dist-e", "chisq:4", "--pbar-db", "20"});
  REQUIRE (r.code == 0);
  auto j = nlohmann::json::parse (r.out);
  CHECK (j["upper_full"]["value"].get<double> () >= j["lower_full"]["value"].get<double> ());
  CHECK (j["upper_main"]["value"].get<double> () >= j["lower_main"]["value"].get<double> ());
  CHECK (j["lower_main"].contains ("diagnostics"));

  r = run_cli ({"bounds", "--pbar-db", "-inf"});
  REQUIRE (r.code == 0);
  j = nlohmann::json::parse (r.out);
  for (const char *k : {"upper_full", "lower_full", "upper_main", "lower_main"})
    {
      CHECK (j[k]["value"].get<double> () == 0.0);
    }

  r = run_cli ({"bounds", "--dist-m", "exp:1", "--dist-e", "exp:1", "--policy", "full-inv"});
  CHECK (r.code == 3);
  CHECK (r.err.find ("non-invertible channel") != std::string::npos);

  r = run_cli ({"bounds", "--pbar", "10", "--bits"});
  REQUIRE (r.code == 0);
  CHECK (nlohmann::json::parse (r.out)["lower_full"].contains ("value_bits"));
}

TEST_CASE ("usage errors")
{
  CHECK (run_cli ({}).code == 2);
  CHECK (run_cli ({"frobnicate"}).code == 2);
  CHECK (run_cli ({"bounds", "--dist-m", "weibull:2"}).code == 2);
  CHECK (run_cli ({"bounds", "--pbar-db", "abc"}).code == 2);
  CHECK (run_cli ({"bounds", "--pbar", "1", "--pbar-db", "1"}).code == 2);
  CHECK (run_cli ({"bounds", "--policy", "magic"}).code == 2);
  CHECK (run_cli ({"sweep", "--snr-db", "10,5"}).code == 2);
  CHECK (run_cli ({"simulate", "-b", "0"}).code == 2);
  CHECK (run_cli ({"simulate", "--scheme", "main", "--key-release", "block"}).code == 2);
  CHECK (run_cli ({"bounds", "--help"}).code == 0);
}

TEST_CASE ("config file, overridden by flags")
{
  {
    std::ofstream f ("bounds.cfg");
    f << "# model\npbar-db = 10\ndist-m = gamma:2:1\n";
  }
  auto r = run_cli ({"bounds", "--config", "bounds.cfg", "--pbar-db", "30"});
  REQUIRE (r.code == 0);
  auto j = nlohmann::json::parse (r.out);
  CHECK (j["pbar_db"].get<double> () == doctest::Approx (30.0));
  CHECK (j["dist_m"] == "gamma:2:1");

  {
    std::ofstream f ("bad.cfg");
    f << "pbar-db = 10\ncolour = blue\n";
  }
  r = run_cli ({"bounds", "--config", "bad.cfg"});
  CHECK (r.code == 2);
  CHECK (r.err.find ("colour") != std::string::npos);
  CHECK (run_cli ({"bounds", "--config", "missing.cfg"}).code == 2);
}

TEST_CASE ("sweep")
{
  auto r = run_cli ({"sweep", "--snr-db", "0:40:5"});
  REQUIRE (r.code == 0);
  std::istringstream in (r.out);
  const auto t = read_csv (in);
  CHECK (t.header.size () == 6);
  REQUIRE (t.rows.size () == 9);
  for (std::size_t i = 0; i < t.rows.size (); ++i)
    {
      CHECK (t.number (i, "upper_full") >= t.number (i, "lower_full") - 1e-9);
      CHECK (t.number (i, "upper_main") >= t.number (i, "lower_main") - 1e-9);
      CHECK (t.number (i, "high_snr_limit") == t.number (0, "high_snr_limit"));
      if (i > 0)
        {
          CHECK (t.number (i, "lower_full") >= t.number (i - 1, "lower_full") - 1e-9);
        }
    }

  r = run_cli ({"sweep", "--snr-db", "7", "--out", "one.csv"});
  REQUIRE (r.code == 0);
  std::ifstream f ("one.csv");
  const auto one = read_csv (f);
  CHECK (one.rows.size () == 1);
  CHECK (one.number (0, "snr_db") == 7.0);
}

TEST_CASE ("simulate")
{
  auto r = run_cli ({"simulate", "--scheme", "baseline", "-a", "100", "-b", "100", "--json", "base.json", "--csv", "base.csv"});
  REQUIRE (r.code == 0);
  CHECK (r.out.rfind ("starvation=0 insecure_frac=0 outage_frac=", 0) == 0);
  const auto j = nlohmann::json::parse (slurp ("base.json"));
  CHECK (std::abs (j["outage_fraction"].get<double> () - 0.5) <= 3.0 * 0.005);

  r = run_cli ({"simulate", "--scheme", "full", "-b", "1", "-a", "50", "--json", "one.json", "--csv", "one_blocks.csv"});
  REQUIRE (r.code == 0);
  CHECK (r.out.find ("insecure_frac=1 ") != std::string::npos);
  CHECK (nlohmann::json::parse (slurp ("one.json"))["otp_insecure_fraction"] == 1.0);

  for (int i = 0; i < 2; ++i)
    {
      const std::string tag = std::to_string (i);
      r = run_cli ({"simulate", "--scheme", "main", "--seed", "7", "-a", "100", "-b", "5", "--json", "main" + tag + ".json",
                    "--csv", "main" + tag + ".csv"});
      REQUIRE (r.code == 0);
    }
  CHECK (slurp ("main0.json") == slurp ("main1.json"));
  CHECK (slurp ("main0.csv") == slurp ("main1.csv"));
  CHECK (slurp ("main0.csv").rfind (kBlockCsvHeader, 0) == 0);
}

TEST_CASE ("validate")
{
  auto r = run_cli ({"validate", "--quick"});
  CHECK (r.code == 0);
  CHECK (r.out.find ("FAIL") == std::string::npos);

  r = run_cli ({"validate", "--quick", "--sigma", "0", "--abs-tol", "0"});
  CHECK (r.code == 4);
  CHECK (r.err.find ("E[R_s]") != std::string::npos);
}
