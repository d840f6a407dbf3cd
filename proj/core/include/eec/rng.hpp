#pragma once

#include <cstddef>
#include <cstdint>
#include <array>
#include <functional>
#include <limits>
#include <span>

namespace eec {

/// Counter-based 64-bit generator: the ChaCha20 keystream (libsodium) with the
/// master seed as key and the stream index as nonce. Word i of a stream is a
/// pure function of (seed, stream, i), so setting one up is cheap and no two
/// replications share state.
class Engine {
 public:
  using result_type = std::uint64_t;

  Engine(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (next_ == buffer_.size()) refill();
    return buffer_[next_++];
  }

 private:
  void refill();

  std::array<unsigned char, 32> key_{};
  std::array<unsigned char, 8> nonce_{};
  std::uint64_t block_ = 0;  // 64-byte keystream block counter
  std::array<std::uint64_t, 32> buffer_{};
  std::size_t next_ = 32;
};

/// Independent stream for replication `stream` under a master seed. Streams
/// depend only on (seed, stream), never on which thread draws them.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform double on [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 picks the
/// hardware concurrency). Exceptions from any worker are rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Kahan-Babuska-Neumaier accumulator.
class NeumaierSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Compensated sum taken in index order, so the result does not depend on
/// how the values were produced.
double compensated_sum(std::span<const double> values);

}  // namespace eec
