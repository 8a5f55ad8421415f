#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ordq {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based Philox4x32-10 generator. A stream is fully determined by its
// 64-bit key; keys for sub-streams are derived by hashing (key, tag), so any
// (seed, purpose, repetition, sample) tuple maps to an independent stream.
// Parallel consumers each build their own Rng and never share state, which is
// what makes results independent of the thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : key_(seed) {
    for (std::uint64_t tag : path) key_ = derive_key(key_, tag);
  }

  // Child stream for a tagged purpose; the parent is unaffected.
  Rng stream(std::uint64_t tag) const {
    Rng child(0);
    child.key_ = derive_key(key_, tag);
    return child;
  }

  std::uint64_t next_u64() {
    if (buf_pos_ == 2) refill();
    return buf_[buf_pos_++];
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via Box-Muller; caches the second deviate.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t reject_under = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= reject_under) return r % n;
    }
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag) {
    return splitmix64(key ^ splitmix64(tag + 0x51AB1ED2C0FFEE01ull));
  }

  void refill() {
    std::array<std::uint32_t, 4> c = ctr_;
    std::uint32_t k0 = static_cast<std::uint32_t>(key_);
    std::uint32_t k1 = static_cast<std::uint32_t>(key_ >> 32);
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = 0xD2511F53ull * c[0];
      std::uint64_t p1 = 0xCD9E8D57ull * c[2];
      std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
          static_cast<std::uint32_t>(p0),
      };
      c = next;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = (static_cast<std::uint64_t>(c[0]) << 32) | c[1];
    buf_[1] = (static_cast<std::uint64_t>(c[2]) << 32) | c[3];
    buf_pos_ = 0;
    if (++ctr_[0] == 0)
      if (++ctr_[1] == 0)
        if (++ctr_[2] == 0) ++ctr_[3];
  }

  std::uint64_t key_;
  std::array<std::uint32_t, 4> ctr_{{0, 0, 0, 0}};
  std::array<std::uint64_t, 2> buf_{{0, 0}};
  int buf_pos_ = 2;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace ordq
