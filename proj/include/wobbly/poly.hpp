#pragma once

#include <algorithm>

#include <string>
#include <utility>
#include <vector>

#include "wobbly/fp.hpp"

namespace wobbly::alg {

// Dense univariate polynomial over F_p, lowest degree first, no trailing
// zeros. The zero polynomial has an empty coefficient vector and degree -1.
struct Poly {
  std::vector<uint32_t> c;

  Poly() = default;
  explicit Poly(std::vector<uint32_t> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  uint32_t coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0;
  }
  uint32_t lead() const { return c.empty() ? 0 : c.back(); }
  bool operator==(const Poly& o) const { return c == o.c; }
  bool operator!=(const Poly& o) const { return !(*this == o); }
};

struct PolyRing {
  Fp F;

  PolyRing() = default;
  explicit PolyRing(Fp field) : F(field) {}
  explicit PolyRing(uint32_t p) : F(p) {}

  Poly zero() const { return Poly{}; }
  Poly one() const { return constant(1); }
  Poly constant(uint32_t a) const {
    Poly r;
    a %= F.p;
    if (a) r.c = {a};
    return r;
  }
  Poly x() const { return Poly({0, 1}); }
  // x^k
  Poly monomial(int k, uint32_t a = 1) const {
    a %= F.p;
    Poly r;
    if (a == 0) return r;
    r.c.assign(k + 1, 0);
    r.c[k] = a;
    return r;
  }
  Poly from_ints(const std::vector<long long>& v) const {
    Poly r;
    r.c.reserve(v.size());
    for (long long a : v) r.c.push_back(F.reduce_int(a));
    r.trim();
    return r;
  }

  Poly add(const Poly& a, const Poly& b) const {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
  }
  Poly sub(const Poly& a, const Poly& b) const {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.sub(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
  }
  Poly neg(const Poly& a) const {
    Poly r = a;
    for (auto& v : r.c) v = F.neg(v);
    return r;
  }
  Poly scale(const Poly& a, uint32_t s) const {
    s %= F.p;
    if (s == 0) return Poly{};
    Poly r = a;
    for (auto& v : r.c) v = F.mul(v, s);
    return r;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    if (a.is_zero() || b.is_zero()) return Poly{};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      for (size_t j = 0; j < b.c.size(); ++j)
        r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
  }
  // x^k * a
  Poly shift(const Poly& a, int k) const {
    if (a.is_zero()) return a;
    require(k >= 0, ErrorKind::Internal, "negative shift");
    Poly r;
    r.c.assign(a.c.size() + k, 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i + k] = a.c[i];
    return r;
  }

  std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const {
    require(!b.is_zero(), ErrorKind::Internal, "poly division by zero");
    Poly rem = a, quot;
    int db = b.degree();
    uint32_t li = F.inv(b.lead());
    if (rem.degree() >= db) quot.c.assign(rem.degree() - db + 1, 0);
    while (rem.degree() >= db) {
      int k = rem.degree() - db;
      uint32_t q = F.mul(rem.lead(), li);
      quot.c[k] = q;
      for (int i = 0; i <= db; ++i)
        rem.c[i + k] = F.sub(rem.c[i + k], F.mul(q, b.c[i]));
      rem.trim();
    }
    quot.trim();
    return {quot, rem};
  }
  Poly quo(const Poly& a, const Poly& b) const { return divmod(a, b).first; }
  Poly rem(const Poly& a, const Poly& b) const { return divmod(a, b).second; }
  bool divides(const Poly& b, const Poly& a) const { return rem(a, b).is_zero(); }

  Poly monic(const Poly& a) const {
    if (a.is_zero()) return a;
    return scale(a, F.inv(a.lead()));
  }
  Poly gcd(Poly a, Poly b) const {
    while (!b.is_zero()) {
      Poly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  Poly derivative(const Poly& a) const {
    Poly r;
    if (a.degree() < 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i)
      r.c[i - 1] = F.mul(a.c[i], static_cast<uint32_t>(i % F.p));
    r.trim();
    return r;
  }
  bool squarefree(const Poly& a) const {
    if (a.degree() <= 0) return !a.is_zero();
    return gcd(a, derivative(a)).degree() == 0;
  }
  uint32_t eval(const Poly& a, uint32_t x0) const {
    uint32_t r = 0;
    for (size_t i = a.c.size(); i-- > 0;) r = F.add(F.mul(r, x0), a.c[i]);
    return r;
  }
  // reverse(a) = x^deg(a) * a(1/x); reverse(a, n) pads to treat a as degree n.
  Poly reverse(const Poly& a, int n = -1) const {
    if (a.is_zero()) return a;
    if (n < 0) n = a.degree();
    require(n >= a.degree(), ErrorKind::Internal, "reverse: n < deg");
    Poly r;
    r.c.assign(n + 1, 0);
    for (int i = 0; i <= a.degree(); ++i) r.c[n - i] = a.c[i];
    r.trim();
    return r;
  }
  Poly pow(Poly a, uint64_t e) const {
    Poly r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  // All roots in F_p with multiplicity 1 each (set of distinct roots).
  std::vector<uint32_t> roots(const Poly& a) const {
    std::vector<uint32_t> out;
    if (a.is_zero()) return out;
    for (uint32_t v = 0; v < F.p; ++v)
      if (eval(a, v) == 0) out.push_back(v);
    return out;
  }
  // Multiplicity of root v.
  int root_multiplicity(Poly a, uint32_t v) const {
    int m = 0;
    Poly lin({F.neg(v), 1});
    while (!a.is_zero() && eval(a, v) == 0) {
      a = quo(a, lin);
      ++m;
    }
    return m;
  }
  Poly random(Rng& rng, int deg) const {
    Poly r;
    if (deg < 0) return r;
    r.c.resize(deg + 1);
    for (auto& v : r.c) v = static_cast<uint32_t>(rng.below(F.p));
    if (r.c.back() == 0) r.c.back() = 1 + static_cast<uint32_t>(rng.below(F.p - 1));
    return r;
  }

  std::string to_string(const Poly& a, const char* var = "x") const {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.degree(); i >= 0; --i) {
      if (a.c[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || a.c[i] != 1) s += std::to_string(a.c[i]);
      if (i > 0) {
        if (a.c[i] != 1) s += "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }
};

}  // namespace wobbly::alg
