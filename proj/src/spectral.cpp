#include "wobbly/spectral.hpp"

#include <algorithm>
#include <set>

namespace wobbly::spectral {

using namespace wobbly::alg;

std::string PlaceCt::to_string() const {
  switch (kind) {
    case CtKind::Split:
      return base.to_string() + "~w" + std::to_string(w);
    case CtKind::Ramified:
      return "ram[" + base.to_string() + "]";
    case CtKind::InfSplit:
      return "inf~s" + std::to_string(w);
  }
  return "?";
}

std::string DivisorCt::to_string() const {
  if (mult.empty()) return "0";
  std::string s;
  for (auto& [pl, m] : mult) {
    if (!s.empty()) s += " + ";
    if (m != 1) s += std::to_string(m) + "*";
    s += pl.to_string();
  }
  return s;
}

// ord of h = A + B y at the infinite place of C; exact by the parity split
// between the A and B parts.
static int ord_inf_h(const HyperellipticCurve& C, const QuadDifferential& q) {
  int v = 1 << 28;
  if (!q.A.is_zero()) v = std::min(v, -2 * q.A.degree());
  if (!q.B.is_zero()) v = std::min(v, -2 * q.B.degree() - (2 * C.g + 1));
  return v;
}

SpectralCurve build_spectral(const HyperellipticCurve& C, const QuadDifferential& q) {
  const PolyRing& R = C.R;
  require(!q.is_zero(), ErrorKind::BadInput, "zero quadratic differential");
  require(q.A.degree() <= 2 * C.g - 2 && q.B.degree() <= C.g - 3, ErrorKind::BadInput,
          "quadratic differential degree bounds violated");

  SpectralCurve S;
  S.base = C;
  S.q = q;
  Poly c = R.gcd(q.A, q.B);
  S.hc = c;
  S.A0 = R.quo(q.A, c);
  S.B0 = R.quo(q.B, c);
  S.N0 = R.sub(R.mul(S.A0, S.A0), R.mul(R.mul(S.B0, S.B0), C.f));
  require(!S.N0.is_zero(), ErrorKind::Internal, "vanishing norm of h0");

  auto singular = [&](const Poly& witness) {
    fail(ErrorKind::SingularSpectral,
         "div(q) not reduced at closed point with minimal polynomial " + R.to_string(witness));
  };

  // 1. repeated factor of the content
  if (c.degree() > 0) {
    Poly cd = R.derivative(c);
    if (cd.is_zero()) singular(c);
    Poly gc = R.gcd(c, cd);
    if (gc.degree() > 0) singular(gc);
  }
  // 2. content meeting a Weierstrass fiber (even local order there)
  {
    Poly gf = R.gcd(c, C.f);
    if (gf.degree() > 0) singular(gf);
  }
  // 3. content meeting the residual branch locus
  {
    Poly gn = R.gcd(c, S.N0);
    if (gn.degree() > 0) singular(gn);
  }
  // 4. repeated zero of h0 (multiple root of the residual norm; coprimality
  //    of A0, B0 rules out conjugate-pair and inert false positives)
  if (S.N0.degree() > 0) {
    Poly nd = R.derivative(S.N0);
    if (nd.is_zero()) singular(S.N0);
    Poly gn = R.gcd(S.N0, nd);
    if (gn.degree() > 0) singular(gn);
  }
  // 5. infinity
  int vq = 4 * C.g - 4 + ord_inf_h(C, q);
  if (vq > 1)
    fail(ErrorKind::SingularSpectral,
         "div(q) has multiplicity " + std::to_string(vq) + " at infinity");
  require(vq >= 0, ErrorKind::Internal, "negative multiplicity at infinity");
  S.inf_ord = vq;
  if (vq == 0) {
    // even leading exponent, dominated by the A part
    require(q.A.degree() == 2 * C.g - 2, ErrorKind::Internal, "infinity bookkeeping");
    S.inf_lead = q.A.lead();
    auto s = C.R.F.sqrt(S.inf_lead);
    S.inf_split = s.has_value();
    S.inf_s = s.value_or(0);
  } else {
    S.inf_split = false;
    S.inf_lead = 0;
    S.inf_s = 0;
  }
  return S;
}

uint32_t h_value(const SpectralCurve& S, const PlaceC& pl) {
  const PolyRing& R = S.base.R;
  require(!pl.is_infinite(), ErrorKind::Internal, "h_value at infinity");
  uint32_t av = R.eval(S.q.A, pl.a);
  if (pl.kind == PlaceKind::Weierstrass) return av;
  return R.F.add(av, R.F.mul(R.eval(S.q.B, pl.a), pl.b));
}

std::vector<PlaceCt> fiber_over(const SpectralCurve& S, const PlaceC& base) {
  const Fp& F = S.base.R.F;
  if (base.is_infinite()) {
    if (S.inf_ord == 1) return {PlaceCt::ramified(base)};
    if (!S.inf_split) return {};
    return {PlaceCt::inf_split(S.inf_s), PlaceCt::inf_split(F.neg(S.inf_s))};
  }
  uint32_t hv = h_value(S, base);
  if (hv == 0) return {PlaceCt::ramified(base)};
  auto w = F.sqrt(hv);
  if (!w) return {};
  return {PlaceCt::split(base, *w), PlaceCt::split(base, F.neg(*w))};
}

DivisorC norm_divisor(const SpectralCurve&, const DivisorCt& Dt) {
  DivisorC out;
  for (auto& [pl, m] : Dt.mult) out.add_place(pl.base, m);
  return out;
}

DivisorCt pullback_divisor(const SpectralCurve& S, const DivisorC& D) {
  DivisorCt out;
  for (auto& [pl, m] : D.mult) {
    auto fib = fiber_over(S, pl);
    if (fib.empty())
      fail(ErrorKind::InertPlace, "fiber over " + pl.to_string() + " is a degree-2 closed point");
    if (fib.size() == 1) {
      out.add_place(fib[0], 2 * m);  // pi^*(p) = 2 pi^-1(p) at branch points
    } else {
      out.add_place(fib[0], m);
      out.add_place(fib[1], m);
    }
  }
  return out;
}

PlaceCt involution_place(const SpectralCurve& S, const PlaceCt& pl) {
  const Fp& F = S.base.R.F;
  PlaceCt r = pl;
  if (pl.kind != CtKind::Ramified) r.w = F.neg(pl.w);
  return r;
}

DivisorCt involution_divisor(const SpectralCurve& S, const DivisorCt& Dt) {
  DivisorCt out;
  for (auto& [pl, m] : Dt.mult) out.add_place(involution_place(S, pl), m);
  return out;
}

PullbackSummand pullback_summand(const SpectralCurve& S, const DivisorCt& Dt) {
  require(Dt.effective(), ErrorKind::BadInput, "pullback_summand needs an effective divisor");
  DivisorC P;
  for (auto& [pl, m] : Dt.mult) {
    if (pl.kind == CtKind::Ramified) {
      if (m >= 2) P.add_place(pl.base, m / 2);
    } else {
      PlaceCt conj = involution_place(S, pl);
      if (pl < conj) continue;  // handle each conjugate pair once
      int k = std::min(m, Dt.at(conj));
      if (k > 0) P.add_place(pl.base, k);
    }
  }
  PullbackSummand out;
  out.P = P;
  out.rest = P.is_zero() ? Dt : Dt - pullback_divisor(S, P);
  require(out.rest.effective(), ErrorKind::Internal, "pullback summand overshoot");
  return out;
}

std::pair<bool, std::vector<QuadDifferential>> is_qspecial_spectral(const SpectralCurve& S,
                                                                    const DivisorCt& Dt) {
  require(Dt.effective(), ErrorKind::BadInput, "Q-speciality needs an effective divisor");
  auto basis = qspecial_system(S.base, norm_divisor(S, Dt));
  return {!basis.empty(), std::move(basis)};
}

std::vector<PlaceCt> rational_places_ct(const SpectralCurve& S) {
  std::vector<PlaceCt> out;
  for (const PlaceC& pl : rational_places(S.base))
    for (const PlaceCt& q : fiber_over(S, pl)) out.push_back(q);
  return out;
}

PlaceCt sample_spectral_place(const SpectralCurve& S, Rng& rng) {
  auto pls = rational_places_ct(S);
  return pls[rng.below(pls.size())];
}

std::vector<PlaceCt> ramified_places(const SpectralCurve& S) {
  const PolyRing& R = S.base.R;
  std::vector<PlaceCt> out;
  // branch x-values: roots of the content and of the residual norm
  std::vector<uint32_t> xs = R.roots(R.mul(S.hc, S.N0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  int found_deg = 0;
  for (uint32_t a : xs) {
    uint32_t fa = R.eval(S.base.f, a);
    if (fa == 0) {
      if (h_value(S, PlaceC::weierstrass(a)) == 0) {
        out.push_back(PlaceCt::ramified(PlaceC::weierstrass(a)));
        ++found_deg;
      }
      continue;
    }
    auto b = R.F.sqrt(fa);
    if (b) {
      for (uint32_t bv : {*b, R.F.neg(*b)}) {
        PlaceC pl = PlaceC::finite(a, bv);
        if (h_value(S, pl) == 0) {
          out.push_back(PlaceCt::ramified(pl));
          ++found_deg;
        }
      }
    } else {
      // the fiber of C over x = a is a degree-2 point; h0 cannot vanish
      // there (coprimality), but the content can
      if (R.eval(S.hc, a) == 0)
        fail(ErrorKind::IrrationalSupport,
             "branch point over x = " + std::to_string(a) + " is not rational");
    }
  }
  if (S.inf_ord == 1) {
    out.push_back(PlaceCt::ramified(PlaceC::infinity()));
    ++found_deg;
  }
  // degree accounting: deg div(q) = 4g-4; every branch place has mult 1
  int expected = 4 * S.base.g - 4;
  if (found_deg != expected)
    fail(ErrorKind::IrrationalSupport,
         "branch divisor has irrational points (" + std::to_string(found_deg) + " of " +
             std::to_string(expected) + " rational)");
  return out;
}

DivisorCt canonical_divisor_ct(const SpectralCurve& S) {
  DivisorCt K;
  DivisorC KC = DivisorC::single(PlaceC::infinity(), 2 * S.base.g - 2);
  K = pullback_divisor(S, KC);
  for (const PlaceCt& r : ramified_places(S)) K.add_place(r, 1);
  require(K.degree() == 2 * S.genus() - 2, ErrorKind::Internal, "canonical degree on Ct");
  return K;
}

// Series for h at a base place, to window end `prec_exp`.
static Series h_series_at(const SpectralCurve& S, const PlaceC& pl, int prec_exp) {
  FunctionOnC h{S.q.A, S.q.B, S.base.R.one()};
  return expand_function(S.base, h, pl, prec_exp);
}

LocalExpansionCt expand_at_ct(const SpectralCurve& S, const PlaceCt& pl, int prec) {
  SeriesRing Sr{S.base.R.F};
  const int g = S.base.g;
  LocalExpansionCt out;
  switch (pl.kind) {
    case CtKind::Split: {
      LocalExpansion le = expand_at(S.base, pl.base, prec);
      Series h = h_series_at(S, pl.base, prec);
      out.x = le.x;
      out.y = le.y;
      out.w = Sr.sqrt(h, pl.w);
      return out;
    }
    case CtKind::InfSplit: {
      LocalExpansion le = expand_at(S.base, PlaceC::infinity(), prec);
      Series h = h_series_at(S, PlaceC::infinity(), prec - (4 * g - 4));
      out.x = le.x;
      out.y = le.y;
      out.w = Sr.sqrt(h, pl.w);
      return out;
    }
    case CtKind::Ramified: {
      // uniformizer tau = w (finite) or tau = t^(2g-2) w (infinite); the base
      // uniformizer t becomes a series in tau^2 solved by fixed point
      int gen = 2 * prec + 8 * g + 16;
      LocalExpansion le = expand_at(S.base, pl.base, gen);
      Series h = h_series_at(S, pl.base, pl.base.is_infinite() ? gen - (4 * g - 4) : gen);
      int vh = h.val_or_prec();
      require(vh < h.prec, ErrorKind::Internal, "h vanished to high order at ramified place");
      require((pl.base.is_infinite() && vh == -(4 * g - 5)) ||
                  (!pl.base.is_infinite() && vh == 1),
              ErrorKind::Internal, "unexpected h valuation at ramified place");
      // tau^2 = t^m h(t) with m = 0 (finite) or 4g-4 (infinite): t * U(t),
      // U a unit series
      int m = pl.base.is_infinite() ? 4 * g - 4 : 0;
      Series U = Sr.shift(h, m - 1);  // h * t^(m-1), valuation 0
      // fixed point t_{k+1} = tau^2 / U(t_k)
      Series tau2 = Sr.uniformizer_pow(2, gen);
      uint32_t u0 = U.coeff(0);
      Series t = Sr.scale(tau2, Sr.F.inv(u0));
      for (int it = 0; it < prec / 2 + 3; ++it)
        t = Sr.mul(tau2, Sr.inv(Sr.compose(U, t, gen)));
      out.x = Sr.compose(le.x, t, gen);
      out.y = Sr.compose(le.y, t, gen);
      if (pl.base.is_infinite()) {
        // w = tau * t^-(2g-2)
        Series tinv = Sr.inv(t);
        Series tp = Sr.constant(1, gen);
        for (int i = 0; i < 2 * g - 2; ++i) tp = Sr.mul(tp, tinv);
        out.w = Sr.mul(Sr.uniformizer_pow(1, gen), tp);
      } else {
        out.w = Sr.uniformizer_pow(1, gen);
      }
      return out;
    }
  }
  fail(ErrorKind::Internal, "unreachable");
}

FnCt fnct_add(const SpectralCurve& S, const FnCt& a, const FnCt& b) {
  return FnCt{fn_add(S.base, a.e0, b.e0), fn_add(S.base, a.e1, b.e1)};
}
FnCt fnct_mul(const SpectralCurve& S, const FnCt& a, const FnCt& b) {
  FunctionOnC h = make_function(S.base, S.q.A, S.q.B, S.base.R.one());
  // (a0 + a1 w)(b0 + b1 w) = a0 b0 + a1 b1 h + (a0 b1 + a1 b0) w
  FunctionOnC e0 =
      fn_add(S.base, fn_mul(S.base, a.e0, b.e0), fn_mul(S.base, fn_mul(S.base, a.e1, b.e1), h));
  FunctionOnC e1 = fn_add(S.base, fn_mul(S.base, a.e0, b.e1), fn_mul(S.base, a.e1, b.e0));
  return FnCt{e0, e1};
}
FnCt fnct_scale(const SpectralCurve& S, const FnCt& a, uint32_t s) {
  return FnCt{fn_scale(S.base, a.e0, s), fn_scale(S.base, a.e1, s)};
}
FnCt fnct_conj(const SpectralCurve& S, const FnCt& a) {
  return FnCt{a.e0, fn_scale(S.base, a.e1, S.base.R.F.neg(1))};
}
FunctionOnC fnct_norm(const SpectralCurve& S, const FnCt& a) {
  FunctionOnC h = make_function(S.base, S.q.A, S.q.B, S.base.R.one());
  return fn_add(S.base, fn_mul(S.base, a.e0, a.e0),
                fn_scale(S.base, fn_mul(S.base, fn_mul(S.base, a.e1, a.e1), h),
                         S.base.R.F.neg(1)));
}

Series expand_fnct(const SpectralCurve& S, const FnCt& fn, const PlaceCt& pl, int min_prec_exp) {
  SeriesRing Sr{S.base.R.F};
  auto deg = [](const FunctionOnC& f) {
    return std::max(0, f.A.degree()) + std::max(0, f.B.degree()) + std::max(0, f.den.degree());
  };
  int slack = 4 * (deg(fn.e0) + deg(fn.e1) + 4 * S.base.g + 4) + 16;
  for (int gp = std::abs(min_prec_exp) + slack;; gp *= 2) {
    LocalExpansionCt le = expand_at_ct(S, pl, gp);
    auto eval_fn = [&](const FunctionOnC& f) {
      Series num = Sr.eval_poly(f.A, le.x, gp);
      if (!f.B.is_zero()) num = Sr.add(num, Sr.mul(Sr.eval_poly(f.B, le.x, gp), le.y));
      Series den = Sr.eval_poly(f.den, le.x, gp);
      require(den.known_nonzero(), ErrorKind::Internal, "denominator invisible");
      return Sr.div(num, den);
    };
    Series r = eval_fn(fn.e0);
    if (!fn.e1.is_zero()) r = Sr.add(r, Sr.mul(eval_fn(fn.e1), le.w));
    if (r.prec >= min_prec_exp) return r;
    require(gp < (1 << 20), ErrorKind::Internal, "ct expansion precision runaway");
  }
}

int ord_at_ct(const SpectralCurve& S, const FnCt& fn, const PlaceCt& pl) {
  require(!fn.is_zero(), ErrorKind::BadInput, "ord of zero function");
  auto deg = [](const FunctionOnC& f) {
    return std::max(0, f.A.degree()) + std::max(0, f.B.degree()) + std::max(0, f.den.degree());
  };
  int bound = 8 * (deg(fn.e0) + deg(fn.e1) + 4 * S.base.g + 4) + 16;
  Series s = expand_fnct(S, fn, pl, bound);
  int v = s.val_or_prec();
  require(v < s.prec, ErrorKind::Internal, "ct function numerically zero past pole bound");
  return v;
}

DivisorCt divisor_of_fnct(const SpectralCurve& S, const FnCt& fn) {
  require(!fn.is_zero(), ErrorKind::BadInput, "divisor of zero function");
  const HyperellipticCurve& C = S.base;
  const PolyRing& R = C.R;
  FunctionOnC nrm = fnct_norm(S, fn);
  require(!nrm.is_zero(), ErrorKind::Internal, "rank-2 norm vanished");
  // The norm legislates where zeros and poles can sit: v_P(Nm) equals the
  // f_Q-weighted sum of ord_Q over the fiber of Ct -> C above P. A zero can
  // hide from the norm only against a pole over the same base place, so the
  // norm support plus every pole-capable fiber (denominator roots, infinity)
  // is a complete candidate list.
  DivisorC Dn = divisor_of_function(C, nrm);  // may raise IrrationalSupport
  std::set<PlaceC> cand;
  for (auto& [plc, vn] : Dn.mult) cand.insert(plc);
  for (uint32_t a : R.roots(R.mul(fn.e0.den, fn.e1.den)))
    for (const PlaceC& plc : places_over_x(C, a)) cand.insert(plc);
  cand.insert(PlaceC::infinity());

  DivisorCt out;
  for (const PlaceC& plc : cand) {
    int vn = 0;
    if (auto it = Dn.mult.find(plc); it != Dn.mult.end()) vn = it->second;
    auto fib = fiber_over(S, plc);
    if (fib.empty()) {
      if (vn != 0)
        fail(ErrorKind::IrrationalSupport, "support over inert fiber at " + plc.to_string());
      continue;
    }
    int seen = 0;
    for (const PlaceCt& q : fib) {
      int v = ord_at_ct(S, fn, q);
      out.add_place(q, v);
      seen += v;
    }
    require(seen == vn, ErrorKind::Internal, "ct fiber valuation accounting failed");
  }
  if (out.degree() != 0)
    fail(ErrorKind::IrrationalSupport, "ct function has support at irrational points");
  return out;
}

}  // namespace wobbly::spectral
