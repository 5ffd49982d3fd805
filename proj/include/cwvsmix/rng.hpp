#pragma once

#include <cstdint>

namespace cwvsmix {

// PCG64 XSL-RR 128/64 with per-stream increments (the setseq mechanism).
// Equal (seed, stream_id) pairs replay the exact same sequence; distinct
// stream_ids select distinct non-overlapping sequences, which is how chains
// and simulation replicates get independent randomness.  A stream is owned
// by exactly one chain/replicate at a time; it is movable between threads
// but must never be shared concurrently.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform strictly inside (0, 1): safe as input to inverse CDFs and logs.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  using u128 = unsigned __int128;
  u128 state_;
  u128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;

  void step();
};

}  // namespace cwvsmix
