#include "wobbly/basecurve.hpp"

#include <algorithm>

namespace wobbly::curve {

using namespace wobbly::alg;

HyperellipticCurve validate_curve(uint32_t p, int g, const Poly& f_raw) {
  require(p != 2, ErrorKind::InvalidCurve, "p = 2 is rejected (spectral covers divide by 2)");
  require(p % 2 == 1 && is_prime_u32(p), ErrorKind::InvalidCurve,
          "p must be an odd prime, got " + std::to_string(p));
  require(g >= 2, ErrorKind::InvalidCurve, "genus must be >= 2, got " + std::to_string(g));
  PolyRing R{Fp{p}};
  Poly f = f_raw;
  f.trim();
  require(f.degree() == 2 * g + 1, ErrorKind::InvalidCurve,
          "deg f = " + std::to_string(f.degree()) + ", expected 2g+1 = " +
              std::to_string(2 * g + 1));
  require(f.lead() == 1, ErrorKind::InvalidCurve, "f must be monic");
  require(R.squarefree(f), ErrorKind::InvalidCurve, "f is not squarefree");
  HyperellipticCurve C;
  C.p = p;
  C.g = g;
  C.f = f;
  C.R = R;
  return C;
}

std::string PlaceC::to_string() const {
  switch (kind) {
    case PlaceKind::Finite:
      return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case PlaceKind::Weierstrass:
      return "W(" + std::to_string(a) + ")";
    case PlaceKind::Infinity:
      return "inf";
  }
  return "?";
}

std::string DivisorC::to_string() const {
  if (mult.empty()) return "0";
  std::string s;
  for (auto& [pl, m] : mult) {
    if (!s.empty()) s += " + ";
    if (m != 1) s += std::to_string(m) + "*";
    s += pl.to_string();
  }
  return s;
}

QuadDifferential make_quaddiff(const HyperellipticCurve& C, const Poly& A, const Poly& B) {
  require(A.degree() <= 2 * C.g - 2, ErrorKind::BadInput, "deg A exceeds 2g-2");
  require(B.degree() <= C.g - 3, ErrorKind::BadInput, "deg B exceeds g-3");
  return QuadDifferential{A, B};
}

FunctionOnC make_function(const HyperellipticCurve& C, Poly A, Poly B, Poly den) {
  const PolyRing& R = C.R;
  require(!den.is_zero(), ErrorKind::BadInput, "zero denominator");
  if (A.is_zero() && B.is_zero()) return FunctionOnC{Poly{}, Poly{}, R.one()};
  Poly content = R.gcd(R.gcd(A, B), den);
  if (content.degree() > 0) {
    A = R.quo(A, content);
    B = R.quo(B, content);
    den = R.quo(den, content);
  }
  uint32_t l = den.lead();
  if (l != 1) {
    uint32_t s = R.F.inv(l);
    A = R.scale(A, s);
    B = R.scale(B, s);
    den = R.scale(den, s);
  }
  return FunctionOnC{A, B, den};
}

FunctionOnC fn_add(const HyperellipticCurve& C, const FunctionOnC& a, const FunctionOnC& b) {
  const PolyRing& R = C.R;
  Poly A = R.add(R.mul(a.A, b.den), R.mul(b.A, a.den));
  Poly B = R.add(R.mul(a.B, b.den), R.mul(b.B, a.den));
  return make_function(C, A, B, R.mul(a.den, b.den));
}

FunctionOnC fn_mul(const HyperellipticCurve& C, const FunctionOnC& a, const FunctionOnC& b) {
  const PolyRing& R = C.R;
  Poly A = R.add(R.mul(a.A, b.A), R.mul(R.mul(a.B, b.B), C.f));
  Poly B = R.add(R.mul(a.A, b.B), R.mul(a.B, b.A));
  return make_function(C, A, B, R.mul(a.den, b.den));
}

FunctionOnC fn_scale(const HyperellipticCurve& C, const FunctionOnC& a, uint32_t s) {
  return make_function(C, C.R.scale(a.A, s), C.R.scale(a.B, s), a.den);
}

FunctionOnC fn_inv(const HyperellipticCurve& C, const FunctionOnC& a) {
  const PolyRing& R = C.R;
  require(!a.is_zero(), ErrorKind::BadInput, "inverse of zero function");
  // 1/((A+By)/d) = d (A - By) / (A^2 - B^2 f)
  Poly norm = R.sub(R.mul(a.A, a.A), R.mul(R.mul(a.B, a.B), C.f));
  require(!norm.is_zero(), ErrorKind::Internal, "vanishing norm of nonzero function");
  return make_function(C, R.mul(a.den, a.A), R.neg(R.mul(a.den, a.B)), norm);
}

FunctionOnC fn_conj(const HyperellipticCurve& C, const FunctionOnC& a) {
  return FunctionOnC{a.A, C.R.neg(a.B), a.den};
}

// f(a + s) as a polynomial in s.
static Poly taylor_shift(const PolyRing& R, const Poly& f, uint32_t a) {
  Poly res;
  Poly lin({a, 1});  // s + a
  for (int i = f.degree(); i >= 0; --i) {
    res = R.mul(res, lin);
    res = R.add(res, R.constant(f.c[i]));
  }
  return res;
}

LocalExpansion expand_at(const HyperellipticCurve& C, const PlaceC& pl, int prec) {
  SeriesRing S{C.R.F};
  const Fp& F = C.R.F;
  LocalExpansion le;
  switch (pl.kind) {
    case PlaceKind::Finite: {
      // t = x - a; y = sqrt(f(a+t)) with branch y(0) = b.
      Series xs(0, prec);
      if (prec > 0) xs.set(0, pl.a);
      if (prec > 1) xs.set(1, 1);
      Series fs = S.eval_poly(taylor_shift(C.R, C.f, pl.a), S.uniformizer_pow(1, prec), prec);
      le.x = xs;
      le.y = S.sqrt(fs, pl.b);
      break;
    }
    case PlaceKind::Weierstrass: {
      // t = y; x = a + s(t) with f(a + s) = t^2, solved by fixed point.
      Poly fa = taylor_shift(C.R, C.f, pl.a);
      require(fa.coeff(0) == 0, ErrorKind::Internal, "not a Weierstrass x-value");
      uint32_t fp1 = fa.coeff(1);
      require(fp1 != 0, ErrorKind::Internal, "f not squarefree at Weierstrass place");
      Poly tail = fa;  // terms of degree >= 2 in s
      if (!tail.c.empty()) tail.c[0] = 0;
      if (tail.c.size() > 1) tail.c[1] = 0;
      tail.trim();
      uint32_t ifp = F.inv(fp1);
      Series t2 = S.uniformizer_pow(2, prec);
      Series s = S.scale(t2, ifp);
      for (int it = 0; it < prec / 2 + 2; ++it)
        s = S.scale(S.sub(t2, S.eval_poly(tail, s, prec + 2)), ifp);
      Series xs = S.add(S.constant(pl.a, prec + 2), s);
      le.x = xs;
      le.y = S.uniformizer_pow(1, prec);
      break;
    }
    case PlaceKind::Infinity: {
      // x = t^-2, y = t^-(2g+1) sqrt(F(t)), F = t^(4g+2) f(1/t^2), F(0) = 1.
      Series xs(-2, -2 + prec);
      xs.set(-2, 1);
      Series Ft = S.from_poly(C.f_star(), prec);
      le.x = xs;
      le.y = S.shift(S.sqrt(Ft, 1), -(2 * C.g + 1));
      break;
    }
  }
  return le;
}

Series expand_function(const HyperellipticCurve& C, const FunctionOnC& fn, const PlaceC& pl,
                       int min_prec_exp) {
  SeriesRing S{C.R.F};
  int slack = 2 * (std::max(0, fn.A.degree()) + std::max(0, fn.B.degree()) +
                   std::max(0, fn.den.degree()) + 2 * C.g + 2) +
              8;
  for (int gp = std::abs(min_prec_exp) + slack;; gp *= 2) {
    LocalExpansion le = expand_at(C, pl, gp);
    Series num = S.eval_poly(fn.A, le.x, gp);
    if (!fn.B.is_zero()) num = S.add(num, S.mul(S.eval_poly(fn.B, le.x, gp), le.y));
    Series den = S.eval_poly(fn.den, le.x, gp);
    if (!den.known_nonzero()) continue;
    Series r = S.div(num, den);
    if (r.prec >= min_prec_exp) return r;
    require(gp < (1 << 20), ErrorKind::Internal, "expansion precision runaway");
  }
}

int ord_at(const HyperellipticCurve& C, const FunctionOnC& fn, const PlaceC& pl) {
  require(!fn.is_zero(), ErrorKind::BadInput, "ord of zero function");
  int bound = 2 * (std::max(0, fn.A.degree()) + std::max(0, fn.B.degree()) +
                   std::max(0, fn.den.degree()) + 2 * C.g + 2) +
              8;
  Series s = expand_function(C, fn, pl, bound);
  int v = s.val_or_prec();
  require(v < s.prec, ErrorKind::Internal, "function numerically zero past pole bound");
  return v;
}

std::vector<PlaceC> places_over_x(const HyperellipticCurve& C, uint32_t a, bool* rational) {
  const Fp& F = C.R.F;
  uint32_t fa = C.R.eval(C.f, a);
  if (rational) *rational = true;
  if (fa == 0) return {PlaceC::weierstrass(a)};
  auto b = F.sqrt(fa);
  if (!b) {
    if (rational) *rational = false;
    return {};
  }
  return {PlaceC::finite(a, *b), PlaceC::finite(a, F.neg(*b))};
}

DivisorC divisor_of_function(const HyperellipticCurve& C, const FunctionOnC& fn) {
  const PolyRing& R = C.R;
  require(!fn.is_zero(), ErrorKind::BadInput, "divisor of zero function");
  Poly norm_num = R.sub(R.mul(fn.A, fn.A), R.mul(R.mul(fn.B, fn.B), C.f));
  require(!norm_num.is_zero(), ErrorKind::Internal, "norm vanished");
  // candidate x-fibers: zeros of the norm numerator and of the denominator
  std::vector<uint32_t> xs;
  for (uint32_t a : R.roots(norm_num)) xs.push_back(a);
  for (uint32_t a : R.roots(fn.den)) xs.push_back(a);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  DivisorC div;
  for (uint32_t a : xs) {
    bool rational = true;
    auto pls = places_over_x(C, a, &rational);
    int vnorm = R.root_multiplicity(norm_num, a) - 2 * R.root_multiplicity(fn.den, a);
    if (!rational) {
      if (vnorm != 0)
        fail(ErrorKind::IrrationalSupport,
             "support at closed point of degree 2 over x = " + std::to_string(a));
      continue;
    }
    int seen = 0;
    for (const PlaceC& pl : pls) {
      int v = ord_at(C, fn, pl);
      div.add_place(pl, v);
      seen += v;
    }
    require(seen == vnorm, ErrorKind::Internal, "fiber valuation accounting failed");
  }
  int vinf = ord_at(C, fn, PlaceC::infinity());
  div.add_place(PlaceC::infinity(), vinf);
  // a nonzero deficit means zeros or poles at closed points of degree >= 2
  if (div.degree() != 0)
    fail(ErrorKind::IrrationalSupport, "function has support at closed points of degree >= 2");
  return div;
}

DivisorC divisor_of_quaddiff(const HyperellipticCurve& C, const QuadDifferential& q) {
  require(!q.is_zero(), ErrorKind::BadInput, "divisor of zero quadratic differential");
  FunctionOnC h = make_function(C, q.A, q.B, C.R.one());
  DivisorC div = divisor_of_function(C, h);
  div.add_place(PlaceC::infinity(), 4 * C.g - 4);
  require(div.effective(), ErrorKind::Internal, "div(q) not effective");
  require(div.degree() == 4 * C.g - 4, ErrorKind::Internal, "deg div(q) != 4g-4");
  return div;
}

std::vector<QuadDifferential> qspecial_system(const HyperellipticCurve& C, const DivisorC& D) {
  const PolyRing& R = C.R;
  require(D.effective(), ErrorKind::BadInput, "Q-speciality needs an effective divisor");
  const int g = C.g;
  const int na = 2 * g - 1;              // x^0..x^(2g-2)
  const int nb = std::max(0, g - 2);     // x^0..x^(g-3) times y
  const int ncols = na + nb;

  // expansions of the h-part (A + B y) of each basis element at each place
  std::vector<std::vector<uint32_t>> rows;
  for (auto& [pl, m] : D.mult) {
    if (m <= 0) continue;
    int lo = (pl.kind == PlaceKind::Infinity) ? -(4 * g - 4) : 0;
    int hi = lo + m;  // conditions: coefficients of t^e vanish for e in [lo, hi)
    for (int j = 0; j < ncols; ++j) {
      FunctionOnC basis;
      if (j < na)
        basis = FunctionOnC{R.monomial(j), Poly{}, R.one()};
      else
        basis = FunctionOnC{Poly{}, R.monomial(j - na), R.one()};
      Series s = expand_function(C, basis, pl, hi);
      if (j == 0) rows.resize(rows.size() + m);
      for (int e = lo; e < hi; ++e) {
        auto& row = rows[rows.size() - m + (e - lo)];
        row.resize(ncols, 0);
        row[j] = s.coeff(e);
      }
    }
  }
  FpMat M(static_cast<int>(rows.size()), ncols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < ncols; ++j) M.at(static_cast<int>(i), j) = rows[i][j];
  auto ker = kernel_basis(R.F, M);
  std::vector<QuadDifferential> out;
  for (auto& v : ker) {
    Poly A, B;
    A.c.assign(v.begin(), v.begin() + na);
    A.trim();
    B.c.assign(v.begin() + na, v.end());
    B.trim();
    out.push_back(QuadDifferential{A, B});
  }
  return out;
}

// Raw L(D) solver: no Riemann-Roch cross-check (used by rr_space_on_C which
// adds the check).
static std::vector<FunctionOnC> rr_space_raw(const HyperellipticCurve& C, const DivisorC& D) {
  const PolyRing& R = C.R;
  const Fp& F = R.F;
  // denominator absorbing allowed finite poles
  std::map<uint32_t, int> pole_pow;  // x-value -> power of (x - a)
  for (auto& [pl, m] : D.mult) {
    if (pl.is_infinite() || m <= 0) continue;
    int e = (pl.kind == PlaceKind::Weierstrass) ? 2 : 1;
    int k = (m + e - 1) / e;
    auto& v = pole_pow[pl.a];
    v = std::max(v, k);
  }
  Poly den = R.one();
  for (auto& [a, k] : pole_pow) den = R.mul(den, R.pow(Poly({F.neg(a), 1}), k));
  int dden = den.degree();
  int minf = D.at(PlaceC::infinity());

  // infinity constraints are pure degree caps (even/odd pole orders split)
  int degA = (minf + 2 * dden) >= 0 ? (minf + 2 * dden) / 2 : -1;
  int degB2 = minf + 2 * dden - (2 * C.g + 1);
  int degB = degB2 >= 0 ? degB2 / 2 : -1;
  if (minf + 2 * dden < 0) degA = -1;
  int na = degA + 1, nb = degB + 1;
  int ncols = na + nb;
  if (ncols == 0) return {};

  // conditions at every place over the x-support of den, plus forced zeros
  std::vector<std::pair<PlaceC, int>> conds;  // place, required order of psi
  std::map<PlaceC, int> want;                 // required ord of psi at place
  for (auto& [a, k] : pole_pow) {
    bool rational = true;
    auto pls = places_over_x(C, a, &rational);
    require(rational, ErrorKind::Internal, "denominator fiber not rational");
    for (const PlaceC& pl : pls) {
      int e = (pl.kind == PlaceKind::Weierstrass) ? 2 : 1;
      want[pl] = e * k - D.at(pl);
    }
  }
  for (auto& [pl, m] : D.mult) {  // forced zeros away from den support
    if (pl.is_infinite() || m >= 0) continue;
    if (!want.count(pl)) want[pl] = -m;
  }
  for (auto& [pl, w] : want)
    if (w > 0) conds.emplace_back(pl, w);

  int nrows = 0;
  for (auto& [pl, w] : conds) nrows += w;
  FpMat M(nrows, ncols);
  int r0 = 0;
  for (auto& [pl, w] : conds) {
    for (int j = 0; j < ncols; ++j) {
      FunctionOnC basis;
      if (j < na)
        basis = FunctionOnC{R.monomial(j), Poly{}, R.one()};
      else
        basis = FunctionOnC{Poly{}, R.monomial(j - na), R.one()};
      Series s = expand_function(C, basis, pl, w);
      for (int e = 0; e < w; ++e) M.at(r0 + e, j) = s.coeff(e);
    }
    r0 += w;
  }
  auto ker = kernel_basis(F, M);
  std::vector<FunctionOnC> out;
  for (auto& v : ker) {
    Poly A, B;
    A.c.assign(v.begin(), v.begin() + na);
    A.trim();
    B.c.assign(v.begin() + na, v.end());
    B.trim();
    out.push_back(make_function(C, A, B, den));
  }
  return out;
}

std::vector<FunctionOnC> rr_space_on_C(const HyperellipticCurve& C, const DivisorC& D) {
  auto basis = rr_space_raw(C, D);
  // Riemann-Roch consistency against the canonical class (2g-2) * infinity
  DivisorC K = DivisorC::single(PlaceC::infinity(), 2 * C.g - 2);
  int dual = static_cast<int>(rr_space_raw(C, K - D).size());
  require(static_cast<int>(basis.size()) - dual == D.degree() - C.g + 1, ErrorKind::Internal,
          "Riemann-Roch violated by rr_space_on_C");
  return basis;
}

int rr_dim_on_C(const HyperellipticCurve& C, const DivisorC& D) {
  return static_cast<int>(rr_space_on_C(C, D).size());
}

std::vector<PlaceC> rational_places(const HyperellipticCurve& C) {
  const Fp& F = C.R.F;
  std::vector<PlaceC> out;
  for (uint32_t a = 0; a < C.p; ++a) {
    uint32_t fa = C.R.eval(C.f, a);
    if (fa == 0) {
      out.push_back(PlaceC::weierstrass(a));
    } else if (auto b = F.sqrt(fa)) {
      out.push_back(PlaceC::finite(a, *b));
      out.push_back(PlaceC::finite(a, F.neg(*b)));
    }
  }
  out.push_back(PlaceC::infinity());
  return out;
}

PlaceC sample_place(const HyperellipticCurve& C, Rng& rng) {
  auto pls = rational_places(C);
  return pls[rng.below(pls.size())];
}

}  // namespace wobbly::curve
