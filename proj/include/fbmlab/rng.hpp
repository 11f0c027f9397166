#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fbmlab {

/// Philox4x32-10 block function (Salmon et al., counter-based).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Reproducible random stream keyed by (seed, stream_id). Draw k of a stream is
/// a pure function of (seed, stream_id, k), so replicas can run on any thread in
/// any order. A single stream must not be shared between threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Index of the next Philox block to be consumed.
  std::uint64_t position() const noexcept { return block_; }
  void seek(std::uint64_t block) noexcept {
    block_ = block;
    buf_used_ = 4;
    have_spare_ = false;
  }

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller (pairs cached).
  double normal();
  void fill_normal(std::span<double> out);

 private:
  std::array<std::uint32_t, 4> next_block();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_used_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fbmlab
