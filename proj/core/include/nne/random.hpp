#pragma once

#include <cstdint>
#include <random>

namespace nne {

// Reproducible random stream keyed by (seed, stream_id). Replication r of a
// campaign uses stream_id = r, so results do not depend on thread scheduling.
// Variates are generated by hand-written transforms on top of mt19937_64 so the
// output is identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double normal();
  // Inversion below mean 30, PTRD transformed rejection above.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nne
