// Serial reference vs OpenMP kernels: optimizer restarts and the JC phase sweep.
// Usage: ergoloc_bench [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "ergoloc/local.hpp"
#include "ergoloc/models.hpp"
#include "ergoloc/parallel.hpp"
#include "ergoloc/random.hpp"

using namespace ergoloc;

namespace {

template <typename F>
double best_seconds(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx   identical %s\n", name, serial, parallel,
              serial / parallel, same ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("workers: %d, repeats: %d (best time shown)\n", worker_count(), repeats);
  bool all_same = true;

  {
    Rng rng(2024);
    const BipartiteSystem sys = random_system({3, 4}, rng, 0.6);
    OptimizerConfig cfg;
    cfg.restarts = 32;
    ErgotropyReport a, b;
    const double ts = best_seconds(repeats, [&] { a = optimize_local_unitary_serial(sys, cfg); });
    const double tp = best_seconds(repeats, [&] { b = optimize_local_unitary(sys, cfg); });
    const bool same = a.value == b.value && *a.optimal_unitary == *b.optimal_unitary;
    all_same = all_same && same;
    report("optimizer d_S=3 d_E=4", ts, tp, same);
  }
  {
    const JcParams p{1.0, 1.2, 0.1, default_cutoff(10)};
    std::vector<double> phis(2000);
    for (int i = 0; i < 2000; ++i) phis[i] = 20 * std::numbers::pi * i / 1999.0;
    std::vector<SweepRow> a, b;
    const double ts = best_seconds(repeats, [&] { a = jc_sweep_serial(p, 10, 0.4 * std::numbers::pi, phis, false); });
    const double tp = best_seconds(repeats, [&] { b = jc_sweep(p, 10, 0.4 * std::numbers::pi, phis, false); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].local == b[i].local && a[i].switch_off == b[i].switch_off && a[i].delta_off == b[i].delta_off;
    }
    all_same = all_same && same;
    report("jc sweep 2000 points", ts, tp, same);
  }
  return all_same ? 0 : 1;
}
