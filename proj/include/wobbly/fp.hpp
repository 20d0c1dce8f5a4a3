#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wobbly/error.hpp"

namespace wobbly::alg {

// Prime field F_p with p an odd prime that fits in 31 bits. Values are plain
// uint32_t residues in [0, p); the context object carries the modulus.
struct Fp {
  uint32_t p = 0;

  Fp() = default;
  explicit Fp(uint32_t prime) : p(prime) {}

  uint32_t reduce_int(long long v) const {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
  }
  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
  }
  uint32_t pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1 % p;
    uint32_t base = a % p;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  uint32_t inv(uint32_t a) const {
    require(a % p != 0, ErrorKind::Internal, "division by zero in F_p");
    return pow(a, p - 2);
  }
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
  uint32_t half(uint32_t a) const { return mul(a, inv(2 % p)); }

  // Legendre symbol: 0, 1 or p-1 (for -1).
  int legendre(uint32_t a) const {
    a %= p;
    if (a == 0) return 0;
    uint32_t s = pow(a, (p - 1) / 2);
    return s == 1 ? 1 : -1;
  }
  bool is_square(uint32_t a) const { return legendre(a) >= 0; }

  // Tonelli-Shanks. Returns the root r with r <= p - r, or nullopt for
  // quadratic non-residues.
  std::optional<uint32_t> sqrt(uint32_t a) const {
    a %= p;
    if (a == 0) return 0u;
    if (legendre(a) != 1) return std::nullopt;
    uint32_t r;
    if (p % 4 == 3) {
      r = pow(a, (p + 1) / 4);
    } else {
      uint32_t q = p - 1;
      uint32_t s = 0;
      while ((q & 1) == 0) {
        q >>= 1;
        ++s;
      }
      uint32_t z = 2;
      while (legendre(z) != -1) ++z;
      uint32_t c = pow(z, q);
      r = pow(a, (q + 1) / 2);
      uint32_t t = pow(a, q);
      uint32_t m = s;
      while (t != 1) {
        uint32_t i = 0;
        uint32_t tt = t;
        while (tt != 1) {
          tt = mul(tt, tt);
          ++i;
        }
        uint32_t b = c;
        for (uint32_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
        r = mul(r, b);
        c = mul(b, b);
        t = mul(t, c);
        m = i;
      }
    }
    if (r > p - r) r = p - r;
    return r;
  }
};

inline bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Deterministic splittable PRNG (splitmix64). Used everywhere randomness is
// needed so that runs are reproducible from a single seed across platforms.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t lim = ~0ULL - ~0ULL % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % n;
  }
  static Rng derive(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x8e9c0d7a3f5b1e2dULL * (stream + 1)));
    r.next();
    return r;
  }
};

}  // namespace wobbly::alg
