#pragma once

#include <array>
#include <cstdint>

namespace tailproc {

// Counter-based generator: Philox4x32-10. A stream is fully determined by
// (master_seed, stream_id); distinct stream_ids give independent output
// sequences regardless of how draws interleave across threads, which is what
// makes sharded Monte Carlo reproducible for any worker count.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Strong 64-bit mix used to derive child stream ids. For a fixed parent id
// the map tag -> child id is injective.
std::uint64_t mix_stream_id(std::uint64_t parent_id, std::uint64_t tag);

class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : seed_(master_seed), id_(stream_id) {}

  std::uint64_t next_u64();
  // Uniform on (0,1]; never returns 0, so inverse transforms stay finite.
  double uniform_oc();
  // Uniform on [0,1).
  double uniform_co();
  // Standard normal (Box-Muller, one value cached).
  double gaussian();

  RngStream substream(std::uint64_t tag) const {
    return RngStream(seed_, mix_stream_id(id_, tag));
  }

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_id() const { return id_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t id_ = 0;
  std::uint64_t block_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int avail_ = 0;
  bool has_gauss_ = false;
  double gauss_ = 0.0;
};

}  // namespace tailproc
