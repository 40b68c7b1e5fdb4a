#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tailproc/rng.hpp"

namespace tailproc {

// Monte Carlo execution policy. The shard count is part of the statistical
// contract: results are a deterministic function of (seed, n_mc, shards).
// Workers only decide how shards are scheduled, never what they compute.
struct ExecPolicy {
  std::uint64_t n_mc = 100000;
  int shards = 64;
  int workers = 1;
};

// Resolve a worker request: 0 means "TAILPROC_WORKERS env var, else hardware
// concurrency".
int resolve_workers(int requested);

// Run fn(shard) for shard in [0, shards) on up to `workers` threads.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for_shards(int shards, int workers, const std::function<void(int)>& fn);

// Shard-stable Monte Carlo driver: shard s draws its quota from substream
// (s + 1), accumulators merge in shard order.
template <class Acc, class Fn>
Acc mc_sharded(const ExecPolicy& ep, const RngStream& base, Fn fn) {
  const int shards = ep.shards > 0 ? ep.shards : 1;
  std::vector<Acc> accs(static_cast<std::size_t>(shards));
  parallel_for_shards(shards, ep.workers, [&](int s) {
    RngStream rng = base.substream(static_cast<std::uint64_t>(s) + 1);
    const std::uint64_t lo =
        ep.n_mc * static_cast<std::uint64_t>(s) / static_cast<std::uint64_t>(shards);
    const std::uint64_t hi = ep.n_mc * (static_cast<std::uint64_t>(s) + 1) /
                             static_cast<std::uint64_t>(shards);
    fn(rng, hi - lo, accs[static_cast<std::size_t>(s)]);
  });
  Acc total;
  for (const Acc& a : accs) total.merge(a);
  return total;
}

}  // namespace tailproc
