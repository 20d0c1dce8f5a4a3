#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "wobbly/linalg.hpp"
#include "wobbly/poly.hpp"
#include "wobbly/series.hpp"

namespace wobbly::curve {

using alg::Fp;
using alg::Poly;
using alg::PolyRing;
using alg::Rng;
using alg::Series;
using alg::SeriesRing;

// Hyperelliptic base curve C: y^2 = f(x), f monic squarefree of degree
// 2g + 1 over F_p (odd model, one place at infinity).
struct HyperellipticCurve {
  uint32_t p = 0;
  int g = 0;
  Poly f;
  PolyRing R;

  int canonical_degree() const { return 2 * g - 2; }
  // t^(4g+2) f(1/t^2) = reversal of f in t^2; constant term 1.
  Poly f_star() const {
    Poly fs;
    fs.c.assign(2 * (2 * g + 1) + 1, 0);
    for (int i = 0; i <= f.degree(); ++i) fs.c[2 * ((2 * g + 1) - i)] = f.c[i];
    fs.trim();
    return fs;
  }
  // u^(2g+2) f(1/u) as a polynomial in u (u = 1/x); equals u * (reversal).
  Poly f_star_u() const {
    Poly fs;
    fs.c.assign(2 * g + 3, 0);
    for (int i = 0; i <= f.degree(); ++i) fs.c[(2 * g + 2) - i] = f.c[i];
    fs.trim();
    return fs;
  }
};

HyperellipticCurve validate_curve(uint32_t p, int g, const Poly& f_raw);

enum class PlaceKind { Finite, Weierstrass, Infinity };

struct PlaceC {
  PlaceKind kind = PlaceKind::Infinity;
  uint32_t a = 0;  // x-coordinate (Finite, Weierstrass)
  uint32_t b = 0;  // y-coordinate (Finite; nonzero)

  static PlaceC finite(uint32_t a, uint32_t b) { return {PlaceKind::Finite, a, b}; }
  static PlaceC weierstrass(uint32_t a) { return {PlaceKind::Weierstrass, a, 0}; }
  static PlaceC infinity() { return {PlaceKind::Infinity, 0, 0}; }

  auto operator<=>(const PlaceC&) const = default;
  bool is_infinite() const { return kind == PlaceKind::Infinity; }
  std::string to_string() const;
};

// Formal Z-combination of degree-1 places.
struct DivisorC {
  std::map<PlaceC, int> mult;

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
  int at(const PlaceC& pl) const {
    auto it = mult.find(pl);
    return it == mult.end() ? 0 : it->second;
  }
  void add_place(const PlaceC& pl, int m) {
    if (m == 0) return;
    int& v = mult[pl];
    v += m;
    if (v == 0) mult.erase(pl);
  }
  DivisorC& operator+=(const DivisorC& o) {
    for (auto& [pl, m] : o.mult) add_place(pl, m);
    return *this;
  }
  DivisorC operator+(const DivisorC& o) const {
    DivisorC r = *this;
    r += o;
    return r;
  }
  DivisorC operator-(const DivisorC& o) const {
    DivisorC r = *this;
    for (auto& [pl, m] : o.mult) r.add_place(pl, -m);
    return r;
  }
  DivisorC negate() const {
    DivisorC r;
    for (auto& [pl, m] : mult) r.mult[pl] = -m;
    return r;
  }
  DivisorC scaled(int k) const {
    DivisorC r;
    if (k == 0) return r;
    for (auto& [pl, m] : mult) r.mult[pl] = k * m;
    return r;
  }
  DivisorC positive_part() const {
    DivisorC r;
    for (auto& [pl, m] : mult)
      if (m > 0) r.mult[pl] = m;
    return r;
  }
  DivisorC negative_part() const {  // effective divisor of pole orders
    DivisorC r;
    for (auto& [pl, m] : mult)
      if (m < 0) r.mult[pl] = -m;
    return r;
  }
  bool operator==(const DivisorC& o) const { return mult == o.mult; }
  std::string to_string() const;

  static DivisorC single(const PlaceC& pl, int m = 1) {
    DivisorC d;
    d.add_place(pl, m);
    return d;
  }
};

// q = (A(x) + B(x) y) (dx/y)^2 with deg A <= 2g-2, deg B <= g-3.
struct QuadDifferential {
  Poly A, B;
  bool is_zero() const { return A.is_zero() && B.is_zero(); }
};

QuadDifferential make_quaddiff(const HyperellipticCurve& C, const Poly& A, const Poly& B);

// Element (A(x) + B(x) y) / c(x) of the function field, canonical form with
// content removed and c monic.
struct FunctionOnC {
  Poly A, B, den;
  bool is_zero() const { return A.is_zero() && B.is_zero(); }
};

FunctionOnC make_function(const HyperellipticCurve& C, Poly A, Poly B, Poly den);
FunctionOnC fn_add(const HyperellipticCurve& C, const FunctionOnC& a, const FunctionOnC& b);
FunctionOnC fn_mul(const HyperellipticCurve& C, const FunctionOnC& a, const FunctionOnC& b);
FunctionOnC fn_scale(const HyperellipticCurve& C, const FunctionOnC& a, uint32_t s);
FunctionOnC fn_inv(const HyperellipticCurve& C, const FunctionOnC& a);
// Conjugate under the hyperelliptic involution: y -> -y.
FunctionOnC fn_conj(const HyperellipticCurve& C, const FunctionOnC& a);

// Local expansions in the canonical uniformizer of a place: t = x - a at
// Finite, t = y at Weierstrass, and at Infinity x = t^-2, y = t^-(2g+1) u(t).
struct LocalExpansion {
  Series x;  // expansion of the coordinate function x
  Series y;  // expansion of y
};

LocalExpansion expand_at(const HyperellipticCurve& C, const PlaceC& pl, int prec);

// Exact valuation at a place; retries at higher truncation on indeterminacy.
int ord_at(const HyperellipticCurve& C, const FunctionOnC& fn, const PlaceC& pl);

// Expansion of a function at a place to the given precision window.
Series expand_function(const HyperellipticCurve& C, const FunctionOnC& fn, const PlaceC& pl,
                       int prec);

// Divisor of a nonzero quadratic differential: effective of degree 4g-4.
// Throws IrrationalSupport when a zero sits at a closed point of degree > 1.
DivisorC divisor_of_quaddiff(const HyperellipticCurve& C, const QuadDifferential& q);

// Divisor of a nonzero function (degree 0). Same rationality caveat.
DivisorC divisor_of_function(const HyperellipticCurve& C, const FunctionOnC& fn);

// Basis of {q in H^0(K^2) : div(q) - D effective}. D is Q-special iff the
// returned basis is nonempty.
std::vector<QuadDifferential> qspecial_system(const HyperellipticCurve& C, const DivisorC& D);

// Riemann-Roch space L(D) = {phi : div(phi) + D >= 0}; exact basis, checked
// internally against Riemann-Roch using the canonical class (2g-2) * infty.
std::vector<FunctionOnC> rr_space_on_C(const HyperellipticCurve& C, const DivisorC& D);
int rr_dim_on_C(const HyperellipticCurve& C, const DivisorC& D);

// Places of C above a finite x-value; empty (rational=false) when the fiber
// is a degree-2 closed point.
std::vector<PlaceC> places_over_x(const HyperellipticCurve& C, uint32_t a,
                                  bool* rational = nullptr);

// All degree-1 places, Weierstrass and infinite included. Cached order is
// deterministic (by x, then y).
std::vector<PlaceC> rational_places(const HyperellipticCurve& C);

PlaceC sample_place(const HyperellipticCurve& C, Rng& rng);

}  // namespace wobbly::curve
