// Test-only brute-force smoothness oracle: enumerates closed points of
// degree <= 2 over F_p with quadratic-extension arithmetic and decides
// whether div(q) is reduced there (first-order vanishing tests, no series).
// Independent of the symbolic certification in build_spectral.
#pragma once

#include <optional>

#include "wobbly/basecurve.hpp"

namespace oracle {

using wobbly::alg::Fp;
using wobbly::alg::Poly;
using wobbly::alg::PolyRing;

// F_{p^2} = F_p(s), s^2 = n with n the smallest quadratic non-residue.
struct Fq2 {
  Fp F;
  uint32_t n;

  explicit Fq2(Fp base) : F(base) {
    n = 2;
    while (F.legendre(n) != -1) ++n;
  }

  struct El {
    uint32_t re = 0, im = 0;
    bool operator==(const El& o) const { return re == o.re && im == o.im; }
  };

  El from(uint32_t a) const { return {a % F.p, 0}; }
  bool is_zero(const El& a) const { return a.re == 0 && a.im == 0; }
  El add(const El& a, const El& b) const { return {F.add(a.re, b.re), F.add(a.im, b.im)}; }
  El sub(const El& a, const El& b) const { return {F.sub(a.re, b.re), F.sub(a.im, b.im)}; }
  El neg(const El& a) const { return {F.neg(a.re), F.neg(a.im)}; }
  El mul(const El& a, const El& b) const {
    uint32_t re = F.add(F.mul(a.re, b.re), F.mul(n, F.mul(a.im, b.im)));
    uint32_t im = F.add(F.mul(a.re, b.im), F.mul(a.im, b.re));
    return {re, im};
  }
  El inv(const El& a) const {
    // (re - im s) / (re^2 - n im^2)
    uint32_t d = F.sub(F.mul(a.re, a.re), F.mul(n, F.mul(a.im, a.im)));
    uint32_t di = F.inv(d);
    return {F.mul(a.re, di), F.mul(F.neg(a.im), di)};
  }
  El pow(El a, uint64_t e) const {
    El r = from(1);
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  bool is_square(const El& a) const {
    if (is_zero(a)) return true;
    uint64_t e = (static_cast<uint64_t>(F.p) * F.p - 1) / 2;
    return pow(a, e) == from(1);
  }
  // Tonelli-Shanks in F_{p^2}.
  std::optional<El> sqrt(const El& a) const {
    if (is_zero(a)) return from(0);
    if (!is_square(a)) return std::nullopt;
    uint64_t q = static_cast<uint64_t>(F.p) * F.p - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    // find a non-square z
    El z = {1, 1};
    uint32_t tick = 0;
    while (is_square(z)) {
      ++tick;
      z = {tick % F.p, (tick / F.p + 1) % F.p};
    }
    El c = pow(z, q);
    El r = pow(a, (q + 1) / 2);
    El t = pow(a, q);
    int m = s;
    while (!(t == from(1))) {
      El tt = t;
      int i = 0;
      while (!(tt == from(1))) {
        tt = mul(tt, tt);
        ++i;
      }
      El b = c;
      for (int j = 0; j + i + 1 < m; ++j) b = mul(b, b);
      r = mul(r, b);
      c = mul(b, b);
      t = mul(t, c);
      m = i;
    }
    return r;
  }
  El eval(const Poly& p, const El& x) const {
    El r = from(0);
    for (size_t i = p.c.size(); i-- > 0;) r = add(mul(r, x), from(p.c[i]));
    return r;
  }
};

// All roots of P lying in F_{p^2}: rational roots plus roots of irreducible
// quadratic factors, found by exhaustive trial division.
inline std::vector<Fq2::El> roots_in_fp2(const PolyRing& R, const Fq2& Q, Poly P) {
  std::vector<Fq2::El> out;
  if (P.is_zero()) return out;
  for (uint32_t a : R.roots(P)) {
    out.push_back(Q.from(a));
    Poly lin({R.F.neg(a), 1});
    while (R.rem(P, lin).is_zero()) P = R.quo(P, lin);
  }
  const Fp& F = R.F;
  for (uint32_t beta = 0; beta < F.p && P.degree() >= 2; ++beta)
    for (uint32_t gamma = 0; gamma < F.p && P.degree() >= 2; ++gamma) {
      Poly quad({gamma, beta, 1});
      if (!R.rem(P, quad).is_zero()) continue;
      // roots (-beta +- sqrt(beta^2 - 4 gamma)) / 2 in F_{p^2}
      uint32_t disc = F.sub(F.mul(beta, beta), F.mul(4 % F.p, gamma));
      auto sd = Q.sqrt(Q.from(disc));
      if (sd) {
        uint32_t ih = F.inv(2 % F.p);
        Fq2::El mb = Q.from(F.neg(beta));
        Fq2::El r1 = Q.mul(Q.add(mb, *sd), Q.from(ih));
        Fq2::El r2 = Q.mul(Q.sub(mb, *sd), Q.from(ih));
        out.push_back(r1);
        out.push_back(r2);
      }
      while (R.rem(P, quad).is_zero()) P = R.quo(P, quad);
    }
  return out;
}

// True iff div(q) is reduced at every closed point of degree <= 2 and at
// infinity, for q = (A + B y)(dx/y)^2 on y^2 = f.
inline bool reduced_oracle_deg2(const wobbly::curve::HyperellipticCurve& C, const Poly& A,
                                const Poly& B) {
  const PolyRing& R = C.R;
  const Fp& F = R.F;
  Fq2 Q(F);
  Poly c = R.gcd(A, B);
  Poly N = R.sub(R.mul(A, A), R.mul(R.mul(B, B), C.f));
  Poly Ad = R.derivative(A), Bd = R.derivative(B), fd = R.derivative(C.f);
  Poly cd = R.derivative(c);

  // infinity: ord_inf(q) = 4g-4 + min(-2 deg A, -2 deg B - (2g+1))
  int vinf = 1 << 28;
  if (!A.is_zero()) vinf = std::min(vinf, -2 * A.degree());
  if (!B.is_zero()) vinf = std::min(vinf, -2 * B.degree() - (2 * C.g + 1));
  if (4 * C.g - 4 + vinf >= 2) return false;

  for (const Fq2::El& x0 : roots_in_fp2(R, Q, N)) {
    Fq2::El fa = Q.eval(C.f, x0);
    Fq2::El Aa = Q.eval(A, x0), Ba = Q.eval(B, x0);
    if (Q.is_zero(fa)) {
      // Weierstrass point: t = y, x - x0 = O(t^2); v >= 2 iff A and B vanish
      if (Q.is_zero(Aa) && Q.is_zero(Ba)) return false;
      continue;
    }
    auto y0 = Q.sqrt(fa);
    if (!y0) {
      // y is irrational over F_{p^2}; h can doubly vanish only through the
      // content: v = v_{x0}(c)
      if (Q.is_zero(Q.eval(c, x0)) && Q.is_zero(Q.eval(cd, x0))) return false;
      continue;
    }
    for (const Fq2::El& y : {*y0, Q.neg(*y0)}) {
      Fq2::El h = Q.add(Aa, Q.mul(Ba, y));
      if (!Q.is_zero(h)) continue;
      // dh/dt = A' + B' y + B f'/(2y)
      Fq2::El dh = Q.add(Q.eval(Ad, x0), Q.mul(Q.eval(Bd, x0), y));
      Fq2::El corr = Q.mul(Ba, Q.mul(Q.eval(fd, x0), Q.inv(Q.add(y, y))));
      dh = Q.add(dh, corr);
      if (Q.is_zero(dh)) return false;
    }
  }
  return true;
}

}  // namespace oracle
