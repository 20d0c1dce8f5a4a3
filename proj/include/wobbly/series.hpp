#pragma once

#include <algorithm>
#include <optional>

#include <vector>

#include "wobbly/poly.hpp"

namespace wobbly::alg {

// Truncated Laurent series in a local uniformizer t: coefficients for
// exponents off, off+1, ..., prec-1 are stored (possibly zero), everything
// from t^prec on is unknown. Exact arithmetic below the truncation order;
// operations track precision loss explicitly.
struct Series {
  int off = 0;
  int prec = 0;  // first unknown exponent; off <= prec
  std::vector<uint32_t> c;

  Series() = default;
  Series(int off_, int prec_) : off(off_), prec(prec_) {
    require(off <= prec, ErrorKind::Internal, "series: off > prec");
    c.assign(prec - off, 0);
  }

  int len() const { return prec - off; }
  uint32_t coeff(int e) const {
    if (e < off || e >= prec) return 0;
    return c[e - off];
  }
  void set(int e, uint32_t v) {
    require(e >= off && e < prec, ErrorKind::Internal, "series: set out of window");
    c[e - off] = v;
  }
  // Valuation if a nonzero coefficient is visible; otherwise prec (meaning
  // "at least prec", indeterminate at this truncation).
  int val_or_prec() const {
    for (int i = 0; i < len(); ++i)
      if (c[i]) return off + i;
    return prec;
  }
  bool known_nonzero() const { return val_or_prec() < prec; }
};

struct SeriesRing {
  Fp F;

  explicit SeriesRing(Fp field) : F(field) {}

  Series zero(int prec) const { return Series(prec, prec); }
  Series constant(uint32_t v, int prec) const {
    Series s(0, prec);
    if (prec > 0) s.set(0, v % F.p);
    return s;
  }
  // t^k
  Series uniformizer_pow(int k, int prec) const {
    Series s(k, k + prec);
    if (s.len() > 0) s.set(k, 1);
    return s;
  }
  Series from_poly(const Poly& p, int prec) const {
    Series s(0, prec);
    for (int i = 0; i < static_cast<int>(p.c.size()) && i < prec; ++i) s.set(i, p.c[i]);
    return s;
  }

  Series add(const Series& a, const Series& b) const {
    int off = std::min(a.off, b.off);
    int prec = std::min(a.prec, b.prec);
    if (prec < off) prec = off;
    Series r(off, prec);
    for (int e = off; e < prec; ++e) r.set(e, F.add(a.coeff(e), b.coeff(e)));
    return r;
  }
  Series neg(const Series& a) const {
    Series r = a;
    for (auto& v : r.c) v = F.neg(v);
    return r;
  }
  Series sub(const Series& a, const Series& b) const { return add(a, neg(b)); }
  Series scale(const Series& a, uint32_t s) const {
    Series r = a;
    for (auto& v : r.c) v = F.mul(v, s % F.p);
    return r;
  }
  Series shift(const Series& a, int k) const {
    Series r = a;
    r.off += k;
    r.prec += k;
    return r;
  }

  // Product precision: a correct term t^e needs all pairs (i, j), i+j = e,
  // known; unknown tails start at a.val+b.prec and b.val+a.prec. Using the
  // stored offsets (not valuations) is safe and simple.
  Series mul(const Series& a, const Series& b) const {
    int prec = std::min(a.off + b.prec, b.off + a.prec);
    int off = a.off + b.off;
    if (prec < off) prec = off;
    Series r(off, prec);
    for (int i = 0; i < a.len(); ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < b.len(); ++j) {
        int e = a.off + i + b.off + j;
        if (e >= prec) break;
        r.set(e, F.add(r.coeff(e), F.mul(a.c[i], b.c[j])));
      }
    }
    return r;
  }

  // Inverse of a series whose valuation is visible. Precision of the result:
  // prec - 2*val + ... computed so that a * inv(a) = 1 + O(t^k) with
  // k = a.prec - val.
  Series inv(const Series& a) const {
    int v = a.val_or_prec();
    require(v < a.prec, ErrorKind::Internal, "series inverse of (numerically) zero");
    int n = a.prec - v;  // correct terms of the unit part
    // u = a / t^v is a unit known to O(t^n); invert by recurrence.
    std::vector<uint32_t> u(n), w(n, 0);
    for (int i = 0; i < n; ++i) u[i] = a.coeff(v + i);
    uint32_t l = F.inv(u[0]);
    w[0] = l;
    for (int k = 1; k < n; ++k) {
      uint32_t s = 0;
      for (int j = 1; j <= k; ++j) s = F.add(s, F.mul(u[j], w[k - j]));
      w[k] = F.mul(F.neg(s), l);
    }
    Series r(-v, -v + n);
    for (int i = 0; i < n; ++i) r.set(-v + i, w[i]);
    return r;
  }
  Series div(const Series& a, const Series& b) const { return mul(a, inv(b)); }

  // Square root of a series with even valuation and square leading
  // coefficient; result^2 == s to the full available precision. `pick`
  // selects the sign of the leading coefficient (the root closest to 0 by
  // the canonical Tonelli-Shanks choice when pick_default).
  Series sqrt(const Series& a, std::optional<uint32_t> lead_choice = std::nullopt) const {
    int v = a.val_or_prec();
    require(v < a.prec, ErrorKind::Internal, "series sqrt of (numerically) zero");
    require(v % 2 == 0, ErrorKind::NonSquareLeading, "odd valuation has no square root");
    int n = a.prec - v;
    std::vector<uint32_t> u(n);
    for (int i = 0; i < n; ++i) u[i] = a.coeff(v + i);
    uint32_t r0;
    if (lead_choice) {
      r0 = *lead_choice % F.p;
      require(F.mul(r0, r0) == u[0], ErrorKind::Internal, "sqrt: bad leading choice");
    } else {
      auto s0 = F.sqrt(u[0]);
      require(s0.has_value(), ErrorKind::NonSquareLeading,
              "leading coefficient is a quadratic non-residue");
      r0 = *s0;
    }
    // (sum r_i t^i)^2 = u: solve coefficient by coefficient.
    std::vector<uint32_t> r(n, 0);
    r[0] = r0;
    uint32_t i2 = F.inv(F.mul(2 % F.p, r0));
    for (int k = 1; k < n; ++k) {
      uint32_t s = 0;
      for (int j = 1; j < k; ++j) s = F.add(s, F.mul(r[j], r[k - j]));
      r[k] = F.mul(F.sub(u[k], s), i2);
    }
    Series out(v / 2, v / 2 + n);
    for (int i = 0; i < n; ++i) out.set(v / 2 + i, r[i]);
    return out;
  }

  // Substitute g into f (f a series in its own variable with f.off >= 0
  // allowed negative only if g is invertible; here we require ord(g) >= 1).
  Series compose(const Series& f, const Series& g, int prec) const {
    int vg = g.val_or_prec();
    require(vg >= 1, ErrorKind::Internal, "compose: substitution needs ord >= 1");
    Series acc = zero(prec);
    // Horner from the top stored exponent down to f.off; negative exponents
    // of f handled via inverse powers of g.
    Series gpow = constant(1, prec);
    std::vector<Series> pows;  // g^k for k = 0.. (lazily)
    pows.push_back(gpow);
    auto g_pow = [&](int k) {
      while (static_cast<int>(pows.size()) <= k) pows.push_back(mul(pows.back(), g));
      return pows[k];
    };
    Series ginv = inv(g);
    Series gipow = constant(1, prec);
    for (int e = f.off; e < f.prec; ++e) {
      uint32_t cv = f.coeff(e);
      if (cv == 0) continue;
      Series term;
      if (e >= 0) {
        term = scale(g_pow(e), cv);
      } else {
        Series t = constant(cv, prec);
        for (int i = 0; i < -e; ++i) t = mul(t, ginv);
        term = t;
      }
      acc = add(acc, term);
    }
    // Precision: composing f known to O(t^f.prec) with ord(g) = vg gives
    // correctness to O(t^(f.prec * vg)) at best; clamp.
    int p2 = std::min(acc.prec, f.prec * vg);
    if (p2 < acc.off) p2 = acc.off;
    Series r(acc.off, p2);
    for (int e = acc.off; e < p2; ++e) r.set(e, acc.coeff(e));
    return r;
  }

  // Evaluate an F_p[x]-polynomial on a series. Power-sum form rather than
  // Horner: keeps the precision window maximal when g has negative valuation.
  Series eval_poly(const Poly& p, const Series& g, int prec) const {
    Series acc = zero(prec);
    Series gp = constant(1, prec);
    for (size_t i = 0; i < p.c.size(); ++i) {
      if (i > 0) gp = mul(gp, g);
      if (p.c[i]) acc = add(acc, scale(gp, p.c[i]));
    }
    return acc;
  }
};

}  // namespace wobbly::alg
