#include "eec/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include <sodium.h>

namespace eec {

namespace {

// Little-endian byte image, so streams agree across hosts.
template <std::size_t N>
void store_le(std::uint64_t v, std::array<unsigned char, N>& out) {
  for (std::size_t i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium failed to initialize");
}

}  // namespace

Engine::Engine(std::uint64_t seed, std::uint64_t stream) {
  ensure_sodium();
  store_le(seed, key_);
  store_le(stream, nonce_);
}

void Engine::refill() {
  static const std::array<unsigned char, sizeof buffer_> zeros{};
  std::array<unsigned char, sizeof buffer_> bytes;
  crypto_stream_chacha20_xor_ic(bytes.data(), zeros.data(), bytes.size(), nonce_.data(), block_,
                                key_.data());
  block_ += bytes.size() / 64;
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    std::uint64_t w = 0;
    for (std::size_t b = 0; b < 8; ++b) w |= std::uint64_t{bytes[8 * i + b]} << (8 * b);
    buffer_[i] = w;
  }
  next_ = 0;
}

Engine make_stream(std::uint64_t seed, std::uint64_t stream) { return Engine(seed, stream); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void NeumaierSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  NeumaierSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace eec
