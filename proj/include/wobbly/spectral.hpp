#pragma once

#include <string>
#include <vector>

#include "wobbly/basecurve.hpp"

namespace wobbly::spectral {

using namespace wobbly::curve;

// Smooth SL2 spectral curve Ct: v^2 = q inside Tot(K_C), presented fiberwise
// as w^2 = h(x, y) with h = A + B y and v = w (dx/y). Smoothness is
// equivalent to div(q) being reduced at closed points of every degree and is
// certified symbolically (no point enumeration) at construction.
struct SpectralCurve {
  HyperellipticCurve base;
  QuadDifferential q;
  // content decomposition h = c * (A0 + B0 y), gcd(A0, B0) = 1
  Poly hc, A0, B0;
  Poly N0;      // A0^2 - B0^2 f
  int inf_ord;  // ord_infty(q), 0 or 1
  bool inf_split;     // true when the fiber over infinity is split rational
  uint32_t inf_lead;  // leading coefficient of h at infinity (inf_ord = 0)
  uint32_t inf_s;     // chosen square root of inf_lead when split

  int genus() const { return 4 * base.g - 3; }
};

SpectralCurve build_spectral(const HyperellipticCurve& C, const QuadDifferential& q);

// h evaluated at a finite or Weierstrass place.
uint32_t h_value(const SpectralCurve& S, const PlaceC& pl);

enum class CtKind { Split, Ramified, InfSplit };

// Degree-1 place of the spectral curve. Split places carry the fiber
// coordinate w with w^2 = h(base); ramified places sit over div(q); InfSplit
// places are the two points over the infinite place of C when ord_inf(q) = 0,
// labeled by the square root s of the leading coefficient of h.
struct PlaceCt {
  CtKind kind = CtKind::Ramified;
  PlaceC base;
  uint32_t w = 0;  // Split: w value; InfSplit: the leading root s

  static PlaceCt split(const PlaceC& b, uint32_t w) { return {CtKind::Split, b, w}; }
  static PlaceCt ramified(const PlaceC& b) { return {CtKind::Ramified, b, 0}; }
  static PlaceCt inf_split(uint32_t s) { return {CtKind::InfSplit, PlaceC::infinity(), s}; }

  auto operator<=>(const PlaceCt&) const = default;
  bool over_infinity() const { return base.is_infinite(); }
  std::string to_string() const;
};

struct DivisorCt {
  std::map<PlaceCt, int> mult;

  int degree() const {
    int d = 0;
    for (auto& [pl, m] : mult) d += m;
    return d;
  }
  bool effective() const {
    for (auto& [pl, m] : mult)
      if (m < 0) return false;
    return true;
  }
  bool reduced() const {
    for (auto& [pl, m] : mult)
      if (m != 1) return false;
    return true;
  }
  bool is_zero() const { return mult.empty(); }
  int at(const PlaceCt& pl) const {
    auto it = mult.find(pl);
    return it == mult.end() ? 0 : it->second;
  }
  void add_place(const PlaceCt& pl, int m) {
    if (m == 0) return;
    int& v = mult[pl];
    v += m;
    if (v == 0) mult.erase(pl);
  }
  DivisorCt operator+(const DivisorCt& o) const {
    DivisorCt r = *this;
    for (auto& [pl, m] : o.mult) r.add_place(pl, m);
    return r;
  }
  DivisorCt operator-(const DivisorCt& o) const {
    DivisorCt r = *this;
    for (auto& [pl, m] : o.mult) r.add_place(pl, -m);
    return r;
  }
  DivisorCt positive_part() const {
    DivisorCt r;
    for (auto& [pl, m] : mult)
      if (m > 0) r.mult[pl] = m;
    return r;
  }
  DivisorCt negative_part() const {
    DivisorCt r;
    for (auto& [pl, m] : mult)
      if (m < 0) r.mult[pl] = -m;
    return r;
  }
  bool operator==(const DivisorCt& o) const { return mult == o.mult; }
  std::string to_string() const;

  static DivisorCt single(const PlaceCt& pl, int m = 1) {
    DivisorCt d;
    d.add_place(pl, m);
    return d;
  }
};

// Places of Ct over a base place (empty when the fiber is inert).
std::vector<PlaceCt> fiber_over(const SpectralCurve& S, const PlaceC& base);

DivisorC norm_divisor(const SpectralCurve& S, const DivisorCt& Dt);
// pi^* on divisors; throws InertPlace on non-square fibers.
DivisorCt pullback_divisor(const SpectralCurve& S, const DivisorC& D);
DivisorCt involution_divisor(const SpectralCurve& S, const DivisorCt& Dt);
PlaceCt involution_place(const SpectralCurve& S, const PlaceCt& pl);

// Largest P with pi^*(P) <= Dt, plus the summand-free remainder.
struct PullbackSummand {
  DivisorC P;
  DivisorCt rest;
};
PullbackSummand pullback_summand(const SpectralCurve& S, const DivisorCt& Dt);

std::pair<bool, std::vector<QuadDifferential>> is_qspecial_spectral(const SpectralCurve& S,
                                                                    const DivisorCt& Dt);

// Rational degree-1 places of Ct in a deterministic order.
std::vector<PlaceCt> rational_places_ct(const SpectralCurve& S);
PlaceCt sample_spectral_place(const SpectralCurve& S, Rng& rng);

// All ramified places (= places over div(q)); throws IrrationalSupport if
// some branch point is not rational.
std::vector<PlaceCt> ramified_places(const SpectralCurve& S);
// Representative of the canonical class of Ct: pi^* K_C + sum of ramified
// places (Riemann-Hurwitz).
DivisorCt canonical_divisor_ct(const SpectralCurve& S);

// Local expansions of (x, y, w) in the canonical uniformizer of a place.
struct LocalExpansionCt {
  Series x, y, w;
};
LocalExpansionCt expand_at_ct(const SpectralCurve& S, const PlaceCt& pl, int prec);

// Element e0 + e1 w of the function field of Ct.
struct FnCt {
  FunctionOnC e0, e1;
  bool is_zero() const { return e0.is_zero() && e1.is_zero(); }
};

FnCt fnct_add(const SpectralCurve& S, const FnCt& a, const FnCt& b);
FnCt fnct_mul(const SpectralCurve& S, const FnCt& a, const FnCt& b);
FnCt fnct_scale(const SpectralCurve& S, const FnCt& a, uint32_t s);
FnCt fnct_conj(const SpectralCurve& S, const FnCt& a);  // w -> -w
// Norm to the function field of C: e0^2 - h e1^2.
FunctionOnC fnct_norm(const SpectralCurve& S, const FnCt& a);

Series expand_fnct(const SpectralCurve& S, const FnCt& fn, const PlaceCt& pl, int min_prec_exp);
int ord_at_ct(const SpectralCurve& S, const FnCt& fn, const PlaceCt& pl);

// Divisor of a nonzero function on Ct (degree 0); IrrationalSupport when the
// support is not rational.
DivisorCt divisor_of_fnct(const SpectralCurve& S, const FnCt& fn);

}  // namespace wobbly::spectral
