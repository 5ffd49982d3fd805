#include "cwvsmix/rng.hpp"

namespace cwvsmix {

namespace {

constexpr unsigned __int128 kMult =
    (static_cast<unsigned __int128>(0x2360ed051fc65da4ULL) << 64) |
    0x4385df649fccf645ULL;

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
  return (v >> rot) | (v << ((-rot) & 63u));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t s = seed;
  const u128 initstate =
      (static_cast<u128>(splitmix64(s)) << 64) | splitmix64(s);
  std::uint64_t t = stream_id;
  const u128 initseq = (static_cast<u128>(splitmix64(t)) << 64) | splitmix64(t);
  inc_ = (initseq << 1) | 1u;
  state_ = 0;
  step();
  state_ += initstate;
  step();
}

void RngStream::step() { state_ = state_ * kMult + inc_; }

std::uint64_t RngStream::next_u64() {
  step();
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^
      static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return rotr64(xored, rot);
}

double RngStream::uniform() {
  // 53-bit mantissa, offset by half an ulp: values lie in (0, 1) strictly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) *
         (1.0 / 9007199254740992.0);
}

}  // namespace cwvsmix
