#include "dlsec/bounds.hpp"
#include "dlsec/protocol.hpp"

#include <benchmark/benchmark.h>

using namespace dlsec;

namespace {

const FadingDistribution chi{ChiSquare{4}};

JointIntegrand
key_integrand ()
{
  return key_rate_integrand (PowerPolicy (FullInversion{133.0}, CsiMode::Full), KeyShareRule{0.5});
}

void
BM_ExpectJoint (benchmark::State &state)
{
  const auto f = key_integrand ();
  const int nodes = static_cast<int> (state.range (0));
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (expect_joint (f, chi, chi, nodes));
    }
}

void
BM_ExpectJointSerial (benchmark::State &state)
{
  const auto f = key_integrand ();
  const int nodes = static_cast<int> (state.range (0));
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (expect_joint_serial (f, chi, chi, nodes));
    }
}

void
BM_McExpect (benchmark::State &state)
{
  const auto f = key_integrand ();
  const auto n = static_cast<std::size_t> (state.range (0));
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (mc_expect (f.value, chi, chi, n, RngSeed{1, 0}));
    }
  state.SetItemsProcessed (state.iterations () * state.range (0));
}

void
BM_McExpectSerial (benchmark::State &state)
{
  const auto f = key_integrand ();
  const auto n = static_cast<std::size_t> (state.range (0));
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (mc_expect_serial (f.value, chi, chi, n, RngSeed{1, 0}));
    }
  state.SetItemsProcessed (state.iterations () * state.range (0));
}

void
BM_LowerMain (benchmark::State &state)
{
  const auto menu = parse_family_menu ("main-inv");
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (lower_main (chi, chi, 100.0, menu).value);
    }
}

void
BM_Simulate (benchmark::State &state)
{
  SimConfig c;
  c.blocks_per_super_block = static_cast<int> (state.range (0));
  for (auto _ : state)
    {
      benchmark::DoNotOptimize (simulate (c).starvation_events);
    }
}

} // namespace

BENCHMARK (BM_ExpectJoint)->Arg (64)->Arg (200)->Unit (benchmark::kMillisecond);
BENCHMARK (BM_ExpectJointSerial)->Arg (64)->Arg (200)->Unit (benchmark::kMillisecond);
BENCHMARK (BM_McExpect)->Arg (1 << 20)->Unit (benchmark::kMillisecond);
BENCHMARK (BM_McExpectSerial)->Arg (1 << 20)->Unit (benchmark::kMillisecond);
BENCHMARK (BM_LowerMain)->Unit (benchmark::kMillisecond);
BENCHMARK (BM_Simulate)->Arg (100)->Arg (500)->Unit (benchmark::kMillisecond);

BENCHMARK_MAIN ();
