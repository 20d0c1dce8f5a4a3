#include "wobbly/lattice.hpp"

#include <algorithm>
#include <climits>

namespace wobbly::bundle {

using namespace wobbly::alg;

// ---------------------------------------------------------------- Laurent

Laurent laurent_of_poly(const PolyRing& R, const Poly& p) {
  Laurent l{p, 0};
  if (l.p.is_zero()) return l;
  int v = 0;
  while (l.p.coeff(v) == 0) ++v;
  if (v > 0) {
    Poly q;
    q.c.assign(l.p.c.begin() + v, l.p.c.end());
    l.p = q;
    l.off = v;
  }
  (void)R;
  return l;
}

Laurent laurent_of_upoly(const PolyRing& R, const Poly& p) {
  if (p.is_zero()) return Laurent{};
  Poly rev = R.reverse(p);  // rev(0) = lead(p) != 0
  return Laurent{rev, -p.degree()};
}

Laurent laurent_mul(const PolyRing& R, const Laurent& a, const Laurent& b) {
  return Laurent{R.mul(a.p, b.p), a.off + b.off};
}

Laurent laurent_shift(const Laurent& a, int k) { return Laurent{a.p, a.off + k}; }

int laurent_topdeg(const Laurent& a) {
  if (a.p.is_zero()) return INT_MIN / 2;
  return a.off + a.p.degree();
}

// ---------------------------------------------------------------- solver

std::vector<std::vector<Poly>> PolyLinSystem::solve() const {
  const Fp& F = R.F;
  const int ncoef = degbound + 1;
  const int ncols = nunk * ncoef;
  int nrows = 0;
  for (const auto& c : congs) nrows += std::max(0, c.M.degree());
  for (const auto& c : caps) {
    int topmax = -1;
    for (const auto& h : c.H) topmax = std::max(topmax, h.degree() + degbound);
    nrows += std::max(0, topmax - c.cap);
  }
  FpMat M(nrows, ncols);
  int r0 = 0;
  for (const auto& cr : congs) {
    int dm = cr.M.degree();
    if (dm <= 0) continue;  // unit modulus: vacuous
    int emax = degbound;
    for (const auto& g : cr.G) emax = std::max(emax, degbound + std::max(0, g.degree()));
    std::vector<Poly> xpow(emax + 1);
    xpow[0] = R.rem(R.one(), cr.M);
    for (int e = 1; e <= emax; ++e) xpow[e] = R.rem(R.shift(xpow[e - 1], 1), cr.M);
    for (int j = 0; j < nunk; ++j) {
      const Poly& g = cr.G[j];
      if (g.is_zero()) continue;
      for (int e = 0; e < ncoef; ++e) {
        Poly acc;
        for (int k = 0; k <= g.degree(); ++k)
          if (g.c[k]) acc = R.add(acc, R.scale(xpow[k + e], g.c[k]));
        for (int t = 0; t <= acc.degree(); ++t)
          M.at(r0 + t, j * ncoef + e) = F.add(M.at(r0 + t, j * ncoef + e), acc.c[t]);
      }
    }
    r0 += dm;
  }
  for (const auto& cr : caps) {
    int topmax = -1;
    for (const auto& h : cr.H) topmax = std::max(topmax, h.degree() + degbound);
    int nr = std::max(0, topmax - cr.cap);
    if (nr == 0) continue;
    for (int j = 0; j < nunk; ++j) {
      const Poly& h = cr.H[j];
      if (h.is_zero()) continue;
      for (int e = 0; e < ncoef; ++e)
        for (int k = 0; k <= h.degree(); ++k) {
          int t = k + e;
          if (t > cr.cap && h.c[k]) {
            int row = r0 + (t - cr.cap - 1);
            M.at(row, j * ncoef + e) = F.add(M.at(row, j * ncoef + e), h.c[k]);
          }
        }
    }
    r0 += nr;
  }
  auto ker = kernel_basis(F, M);
  std::vector<std::vector<Poly>> out;
  for (auto& v : ker) {
    std::vector<Poly> sol(nunk);
    for (int j = 0; j < nunk; ++j) {
      Poly p;
      p.c.assign(v.begin() + j * ncoef, v.begin() + (j + 1) * ncoef);
      p.trim();
      sol[j] = p;
    }
    out.push_back(std::move(sol));
  }
  return out;
}

// ---------------------------------------------------------------- orders

static std::vector<std::vector<std::vector<Poly>>> base_tab(const HyperellipticCurve& C,
                                                            bool infinite) {
  const PolyRing& R = C.R;
  Poly sq = infinite ? C.f_star_u() : C.f;  // eta^2 resp. y^2
  Poly z;
  return {{{R.one(), z}, {z, R.one()}}, {{z, R.one()}, {sq, z}}};
}

static std::vector<std::vector<std::vector<Poly>>> spec_tab(const SpectralCurve& S,
                                                            bool infinite) {
  const PolyRing& R = S.base.R;
  const int g = S.base.g;
  Poly sq, ha, hb;
  if (infinite) {
    sq = S.base.f_star_u();
    // omega^2 = u^(2g-2) A(1/u) + u^(g-3) B(1/u) eta
    ha.c.assign(2 * g - 1, 0);
    for (int i = 0; i <= S.q.A.degree(); ++i) ha.c[2 * g - 2 - i] = S.q.A.c[i];
    ha.trim();
    if (!S.q.B.is_zero()) {
      hb.c.assign(std::max(1, g - 2), 0);
      for (int i = 0; i <= S.q.B.degree(); ++i) hb.c[g - 3 - i] = S.q.B.c[i];
      hb.trim();
    }
  } else {
    sq = S.base.f;
    ha = S.q.A;
    hb = S.q.B;
  }
  auto v = [&](Poly a, Poly b, Poly c, Poly d) {
    return std::vector<Poly>{std::move(a), std::move(b), std::move(c), std::move(d)};
  };
  Poly z;
  std::vector<std::vector<std::vector<Poly>>> t(4, std::vector<std::vector<Poly>>(4));
  // frame {1, Y, W, YW} with Y^2 = sq, W^2 = ha + hb Y
  t[0][0] = v(R.one(), z, z, z);
  t[0][1] = v(z, R.one(), z, z);
  t[0][2] = v(z, z, R.one(), z);
  t[0][3] = v(z, z, z, R.one());
  t[1][1] = v(sq, z, z, z);
  t[1][2] = v(z, z, z, R.one());
  t[1][3] = v(z, z, sq, z);
  t[2][2] = v(ha, hb, z, z);
  t[2][3] = v(R.mul(hb, sq), ha, z, z);
  t[3][3] = v(R.mul(sq, ha), R.mul(sq, hb), z, z);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) t[i][j] = t[j][i];
  return t;
}

static std::vector<Poly> tab_mul(const PolyRing& R,
                                 const std::vector<std::vector<std::vector<Poly>>>& tab,
                                 const std::vector<Poly>& a, const std::vector<Poly>& b) {
  int r = static_cast<int>(a.size());
  std::vector<Poly> out(r);
  for (int i = 0; i < r; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < r; ++j) {
      if (b[j].is_zero()) continue;
      Poly c = R.mul(a[i], b[j]);
      for (int k = 0; k < r; ++k)
        if (!tab[i][j][k].is_zero()) out[k] = R.add(out[k], R.mul(c, tab[i][j][k]));
    }
  }
  return out;
}

static std::vector<Poly> mat_col(const PolyMat& M, int c) {
  std::vector<Poly> v(M.rows);
  for (int r = 0; r < M.rows; ++r) v[r] = M.at(r, c);
  return v;
}

Lat lat_normalize(const OrderData& O, PolyMat gens, Poly den) {
  const PolyRing& R = O.C->R;
  auto res = weak_popov_reduce(R, std::move(gens), O.r);
  Poly content = den;
  for (const auto& e : res.basis.e) content = R.gcd(content, e);
  if (content.degree() > 0) {
    for (auto& e : res.basis.e) e = R.quo(e, content);
    den = R.quo(den, content);
  }
  uint32_t l = den.lead();
  if (l != 1) {
    uint32_t s = R.F.inv(l);
    den = R.scale(den, s);
    for (auto& e : res.basis.e) e = R.scale(e, s);
  }
  return Lat{std::move(res.basis), std::move(den)};
}

Lat lat_identity(const OrderData& O, Chart chart) {
  const PolyRing& R = O.C->R;
  if (chart == Chart::Finite) return Lat{PolyMat::identity(R, O.r), R.one()};
  return lat_normalize(O, O.sat, R.monomial(O.sat_k));
}

Lat lat_mul(const OrderData& O, Chart chart, const Lat& A, const Lat& B) {
  const PolyRing& R = O.C->R;
  const auto& tab = (chart == Chart::Finite) ? O.tab0 : O.tabinf;
  PolyMat gens(O.r, A.basis.cols * B.basis.cols);
  int c = 0;
  for (int i = 0; i < A.basis.cols; ++i)
    for (int j = 0; j < B.basis.cols; ++j, ++c) {
      auto prod = tab_mul(R, tab, mat_col(A.basis, i), mat_col(B.basis, j));
      for (int k = 0; k < O.r; ++k) gens.at(k, c) = prod[k];
    }
  return lat_normalize(O, std::move(gens), R.mul(A.den, B.den));
}

bool lat_contains(const OrderData& O, const Lat& L, const std::vector<Poly>& v, const Poly& den) {
  const PolyRing& R = O.C->R;
  Poly det = pm_det(R, L.basis);
  PolyMat adj = pm_adj(R, L.basis);
  Poly mod = R.mul(det, den);
  for (int i = 0; i < O.r; ++i) {
    Poly acc;
    for (int j = 0; j < O.r; ++j) acc = R.add(acc, R.mul(adj.at(i, j), v[j]));
    acc = R.mul(acc, L.den);
    if (!R.rem(acc, mod).is_zero()) return false;
  }
  return true;
}

std::vector<Poly> lat_coords(const OrderData& O, const Lat& L, const std::vector<Poly>& v,
                             const Poly& den) {
  const PolyRing& R = O.C->R;
  Poly det = pm_det(R, L.basis);
  PolyMat adj = pm_adj(R, L.basis);
  Poly mod = R.mul(det, den);
  std::vector<Poly> out(O.r);
  for (int i = 0; i < O.r; ++i) {
    Poly acc;
    for (int j = 0; j < O.r; ++j) acc = R.add(acc, R.mul(adj.at(i, j), v[j]));
    acc = R.mul(acc, L.den);
    auto [q, rem] = R.divmod(acc, mod);
    require(rem.is_zero(), ErrorKind::Internal, "lat_coords: not a lattice member");
    out[i] = q;
  }
  return out;
}

PolyMat lat_frame_action(const OrderData& O, Chart chart, const Lat& L, int idx) {
  const PolyRing& R = O.C->R;
  const auto& tab = (chart == Chart::Finite) ? O.tab0 : O.tabinf;
  std::vector<Poly> elem(O.r);
  elem[idx] = R.one();
  PolyMat M(O.r, O.r);
  for (int j = 0; j < O.r; ++j) {
    auto prod = tab_mul(R, tab, elem, mat_col(L.basis, j));
    auto coords = lat_coords(O, L, prod, L.den);
    for (int i = 0; i < O.r; ++i) M.at(i, j) = coords[i];
  }
  return M;
}

Lat lat_ideal_inverse(const OrderData& O, Chart chart, const Lat& I) {
  const PolyRing& R = O.C->R;
  const auto& tab = (chart == Chart::Finite) ? O.tab0 : O.tabinf;
  Lat Ord = lat_identity(O, chart);
  Poly nu = R.monic(pm_det(R, I.basis));  // det(B_I) * 1 is an element of I
  Poly detO = pm_det(R, Ord.basis);
  PolyMat adjO = pm_adj(R, Ord.basis);
  int db = nu.degree() + std::max(0, Ord.basis.max_degree()) + I.den.degree() + 2;
  PolyLinSystem sys(R, O.r, db);
  Poly M = R.mul(nu, R.mul(detO, I.den));
  for (int j = 0; j < I.basis.cols; ++j) {
    std::vector<std::vector<Poly>> T(O.r, std::vector<Poly>(O.r));  // [frame i][unknown k]
    for (int k = 0; k < O.r; ++k) {
      auto prod = tab_mul(R, tab, mat_col(Ord.basis, k), mat_col(I.basis, j));
      for (int i = 0; i < O.r; ++i) T[i][k] = prod[i];
    }
    for (int i = 0; i < O.r; ++i) {
      std::vector<Poly> G(O.r);
      for (int k = 0; k < O.r; ++k) {
        Poly acc;
        for (int l = 0; l < O.r; ++l) acc = R.add(acc, R.mul(adjO.at(i, l), T[l][k]));
        G[k] = acc;
      }
      sys.add_congruence(std::move(G), M);
    }
  }
  auto sols = sys.solve();
  PolyMat gens(O.r, static_cast<int>(sols.size()) + O.r);
  int c = 0;
  for (auto& s : sols) {
    for (int i = 0; i < O.r; ++i) {
      Poly acc;
      for (int k = 0; k < O.r; ++k) acc = R.add(acc, R.mul(Ord.basis.at(i, k), s[k]));
      gens.at(i, c) = acc;
    }
    ++c;
  }
  for (int k = 0; k < O.r; ++k, ++c)
    for (int i = 0; i < O.r; ++i) gens.at(i, c) = R.mul(nu, Ord.basis.at(i, k));
  return lat_normalize(O, std::move(gens), R.mul(R.mul(Ord.den, nu), I.den));
}

// ------------------------------------------------------------- saturation

// Round 2 at u = 0: enlarge the monomial order until u-maximal. Everything
// is F_p-linear algebra (trace radical, multiplier ring); no series and no
// field extensions.
static void saturate_at_u(const PolyRing& R, OrderData& O) {
  const Fp& F = R.F;
  const int r = O.r;
  O.sat = PolyMat::identity(R, r);
  O.sat_k = 0;
  for (int round = 0; round < 64; ++round) {
    Lat L{O.sat, R.monomial(O.sat_k)};
    std::vector<std::vector<std::vector<Poly>>> sc(r, std::vector<std::vector<Poly>>(r));
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        auto prod = tab_mul(R, O.tabinf, mat_col(O.sat, i), mat_col(O.sat, j));
        sc[i][j] = lat_coords(O, L, prod, R.monomial(2 * O.sat_k));
        sc[j][i] = sc[i][j];
      }
    std::vector<FpMat> Lm(r, FpMat(r, r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) Lm[i].at(k, j) = sc[i][j][k].coeff(0);
    FpMat Tr(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        FpMat prod = mat_mul(F, Lm[i], Lm[j]);
        uint32_t t = 0;
        for (int k = 0; k < r; ++k) t = F.add(t, prod.at(k, k));
        Tr.at(i, j) = t;
      }
    auto rad = kernel_basis(F, Tr);  // nilradical of Lambda/u Lambda (p > r)
    if (rad.empty()) return;         // etale mod u: maximal
    PolyMat ig(r, r + static_cast<int>(rad.size()));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) ig.at(i, j) = R.shift(O.sat.at(i, j), 1);
    for (size_t v = 0; v < rad.size(); ++v)
      for (int i = 0; i < r; ++i) {
        Poly acc;
        for (int k = 0; k < r; ++k)
          if (rad[v][k]) acc = R.add(acc, R.scale(O.sat.at(i, k), rad[v][k]));
        ig.at(i, r + static_cast<int>(v)) = acc;
      }
    Lat I = lat_normalize(O, std::move(ig), R.monomial(O.sat_k));
    // multiplier ring: v with (v/u) I <= I
    FpMat cond(r * I.basis.cols, r);
    for (int j = 0; j < I.basis.cols; ++j)
      for (int i = 0; i < r; ++i) {
        auto prod = tab_mul(R, O.tabinf, mat_col(O.sat, i), mat_col(I.basis, j));
        auto w = lat_coords(O, I, prod, R.mul(R.monomial(O.sat_k), I.den));
        for (int k = 0; k < r; ++k) cond.at(j * r + k, i) = w[k].coeff(0);
      }
    auto enl = kernel_basis(F, cond);
    if (enl.empty()) return;  // (I : I) = Lambda: u-maximal
    PolyMat ng(r, r + static_cast<int>(enl.size()));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) ng.at(i, j) = R.shift(O.sat.at(i, j), 1);
    for (size_t v = 0; v < enl.size(); ++v)
      for (int i = 0; i < r; ++i) {
        Poly acc;
        for (int k = 0; k < r; ++k)
          if (enl[v][k]) acc = R.add(acc, R.scale(O.sat.at(i, k), enl[v][k]));
        ng.at(i, r + static_cast<int>(v)) = acc;
      }
    Lat NL = lat_normalize(O, std::move(ng), R.monomial(O.sat_k + 1));
    Poly d = NL.den;
    int k = 0;
    while (d.degree() > 0 && d.coeff(0) == 0) {
      d = R.quo(d, R.x());
      ++k;
    }
    require(d.degree() == 0, ErrorKind::Internal, "saturation denominator not a u-power");
    O.sat = NL.basis;
    O.sat_k = k;
  }
  fail(ErrorKind::Internal, "saturation did not stabilize");
}

OrderData make_base_order(const HyperellipticCurve& C) {
  OrderData O;
  O.C = &C;
  O.S = nullptr;
  O.r = 2;
  O.genus_total = C.g;
  O.ex = {0, C.g + 1};
  O.tab0 = base_tab(C, false);
  O.tabinf = base_tab(C, true);
  saturate_at_u(C.R, O);
  return O;
}

OrderData make_spectral_order(const SpectralCurve& S) {
  OrderData O;
  O.C = &S.base;
  O.S = &S;
  O.r = 4;
  O.genus_total = S.genus();
  int g = S.base.g;
  O.ex = {0, g + 1, g - 1, 2 * g};
  O.tab0 = spec_tab(S, false);
  O.tabinf = spec_tab(S, true);
  saturate_at_u(S.base.R, O);
  return O;
}

// -------------------------------------------------------------- place ideals

static std::vector<uint32_t> frame_values_fin(const OrderData& O, const PlaceC& base,
                                              uint32_t wval) {
  const Fp& F = O.C->R.F;
  uint32_t b = (base.kind == PlaceKind::Finite) ? base.b : 0;
  if (O.r == 2) return {1, b};
  return {1, b, wval, F.mul(b, wval)};
}

// value of every saturated-basis element at a place over u = 0, by series
static std::vector<uint32_t> sat_values_at_inf(const OrderData& O, const PlaceCt& pl) {
  const PolyRing& R = O.C->R;
  SeriesRing Sr{R.F};
  const int g = O.C->g;
  int prec = 8 * g + 24 + 4 * O.sat_k;
  Series x, y, w;
  if (O.S) {
    LocalExpansionCt le = expand_at_ct(*O.S, pl, prec);
    x = le.x;
    y = le.y;
    w = le.w;
  } else {
    LocalExpansion le = expand_at(*O.C, PlaceC::infinity(), prec);
    x = le.x;
    y = le.y;
  }
  Series u = Sr.inv(x);
  auto upow = [&](int k) {
    Series s = Sr.constant(1, prec);
    for (int i = 0; i < k; ++i) s = Sr.mul(s, u);
    return s;
  };
  std::vector<Series> fr;
  fr.push_back(Sr.constant(1, prec));
  fr.push_back(Sr.mul(upow(g + 1), y));
  if (O.r == 4) {
    Series om = Sr.mul(upow(g - 1), w);
    fr.push_back(om);
    fr.push_back(Sr.mul(fr[1], om));
  }
  Series uinv = Sr.inv(u);
  std::vector<uint32_t> vals(O.r);
  for (int j = 0; j < O.r; ++j) {
    Series acc = Sr.zero(prec);
    for (int i = 0; i < O.r; ++i) {
      const Poly& c = O.sat.at(i, j);
      if (c.is_zero()) continue;
      acc = Sr.add(acc, Sr.mul(Sr.eval_poly(c, u, prec), fr[i]));
    }
    for (int k = 0; k < O.sat_k; ++k) acc = Sr.mul(acc, uinv);
    require(acc.val_or_prec() >= 0 || !acc.known_nonzero(), ErrorKind::Internal,
            "saturated basis element not integral at infinity");
    vals[j] = acc.coeff(0);
  }
  return vals;
}

Lat place_ideal(const OrderData& O, Chart chart, const PlaceCt& pl) {
  const PolyRing& R = O.C->R;
  const Fp& F = R.F;
  if (chart == Chart::Finite) {
    require(!pl.over_infinity(), ErrorKind::Internal, "infinite place in finite chart");
    uint32_t wv = (pl.kind == CtKind::Split) ? pl.w : 0;
    auto vals = frame_values_fin(O, pl.base, wv);
    Poly lin({F.neg(pl.base.a), 1});
    PolyMat gens(O.r, 2 * O.r);
    for (int i = 0; i < O.r; ++i) {
      gens.at(i, i) = lin;  // (x - a) e_i
      for (int k = 0; k < O.r; ++k)
        gens.at(k, O.r + i) = (k == i) ? R.one() : Poly{};  // e_i ...
      gens.at(0, O.r + i) = R.sub(gens.at(0, O.r + i), R.constant(vals[i]));  // ... - v_i e_0
    }
    return lat_normalize(O, std::move(gens), R.one());
  }
  Poly lin;
  std::vector<uint32_t> vals(O.r);
  if (pl.over_infinity()) {
    lin = R.x();  // the variable u
    vals = sat_values_at_inf(O, pl);
  } else {
    require(pl.base.a != 0, ErrorKind::Internal, "x = 0 place in infinite chart");
    uint32_t u0 = F.inv(pl.base.a);
    lin = Poly({F.neg(u0), 1});
    uint32_t b = (pl.base.kind == PlaceKind::Finite) ? pl.base.b : 0;
    uint32_t wv = (pl.kind == CtKind::Split) ? pl.w : 0;
    int g = O.C->g;
    std::vector<uint32_t> fv = {1, F.mul(F.pow(u0, g + 1), b)};
    if (O.r == 4) {
      fv.push_back(F.mul(F.pow(u0, g - 1), wv));
      fv.push_back(F.mul(fv[1], fv[2]));
    }
    uint32_t uk = F.pow(u0, O.sat_k);
    for (int j = 0; j < O.r; ++j) {
      uint32_t acc = 0;
      for (int i = 0; i < O.r; ++i) acc = F.add(acc, F.mul(R.eval(O.sat.at(i, j), u0), fv[i]));
      vals[j] = F.div(acc, uk);
    }
  }
  PolyMat gens(O.r, 2 * O.r);
  Poly uk = R.monomial(O.sat_k);
  for (int j = 0; j < O.r; ++j) {
    for (int i = 0; i < O.r; ++i) {
      gens.at(i, j) = R.mul(lin, O.sat.at(i, j));
      gens.at(i, O.r + j) = O.sat.at(i, j);
    }
    gens.at(0, O.r + j) = R.sub(gens.at(0, O.r + j), R.scale(uk, vals[j]));
  }
  return lat_normalize(O, std::move(gens), uk);
}

// --------------------------------------------------------------- pairs

void pair_finalize(const OrderData& O, LatticePair& P) {
  const PolyRing& R = O.C->R;
  Poly detF = pm_det(R, P.fin.basis);
  Poly detI = pm_det(R, P.inf.basis);
  require(!detF.is_zero() && !detI.is_zero(), ErrorKind::Internal, "degenerate lattice basis");
  int sum_ex = 0;
  for (int e : O.ex) sum_ex += e;
  // det T = x^shift * (dfin^r rev(detI)) / (detF rev(dinf)^r)
  Poly num = R.mul(R.pow(P.fin.den, O.r), R.reverse(detI));
  Poly den = R.mul(detF, R.pow(R.reverse(P.inf.den), O.r));
  int shift = -sum_ex - detI.degree() + O.r * P.inf.den.degree();
  Poly g = R.gcd(num, den);
  num = R.quo(num, g);
  den = R.quo(den, g);
  while (num.degree() > 0 && num.coeff(0) == 0) {
    num = R.quo(num, R.x());
    ++shift;
  }
  while (den.degree() > 0 && den.coeff(0) == 0) {
    den = R.quo(den, R.x());
    --shift;
  }
  require(num.degree() == 0 && den.degree() == 0, ErrorKind::Internal,
          "lattice pair transition determinant is not a monomial");
  P.det_e = shift;
  P.chi = shift + O.r;
}

static Lat chart_lattice(const OrderData& O, Chart chart,
                         const std::vector<std::pair<PlaceCt, int>>& places) {
  Lat pos = lat_identity(O, chart);
  Lat acc = lat_identity(O, chart);
  bool haspos = false;
  for (auto& [pl, m] : places) {
    Lat I = place_ideal(O, chart, pl);
    for (int i = 0; i < std::abs(m); ++i) {
      if (m > 0) {
        pos = lat_mul(O, chart, pos, I);
        haspos = true;
      } else {
        acc = lat_mul(O, chart, acc, I);
      }
    }
  }
  if (haspos) acc = lat_mul(O, chart, lat_ideal_inverse(O, chart, pos), acc);
  return acc;
}

LatticePair lattice_of_ct(const OrderData& O, const DivisorCt& D) {
  require(O.S != nullptr, ErrorKind::Internal, "spectral order required");
  std::vector<std::pair<PlaceCt, int>> finp, infp;
  for (auto& [pl, m] : D.mult) {
    if (!pl.over_infinity()) finp.push_back({pl, m});
    if (pl.over_infinity() || pl.base.a != 0) infp.push_back({pl, m});
  }
  LatticePair P;
  P.fin = chart_lattice(O, Chart::Finite, finp);
  P.inf = chart_lattice(O, Chart::Infinite, infp);
  pair_finalize(O, P);
  require(P.chi == D.degree() + 1 - O.genus_total, ErrorKind::Internal,
          "lattice chi disagrees with Riemann-Roch");
  return P;
}

LatticePair lattice_of_c(const OrderData& O, const DivisorC& D) {
  require(O.S == nullptr, ErrorKind::Internal, "base order required");
  std::vector<std::pair<PlaceCt, int>> finp, infp;
  for (auto& [pl, m] : D.mult) {
    PlaceCt q = pl.is_infinite() ? PlaceCt::ramified(pl) : PlaceCt::split(pl, 0);
    if (!pl.is_infinite()) finp.push_back({q, m});
    if (pl.is_infinite() || pl.a != 0) infp.push_back({q, m});
  }
  LatticePair P;
  P.fin = chart_lattice(O, Chart::Finite, finp);
  P.inf = chart_lattice(O, Chart::Infinite, infp);
  pair_finalize(O, P);
  require(P.chi == D.degree() + 1 - O.genus_total, ErrorKind::Internal,
          "lattice chi disagrees with Riemann-Roch");
  return P;
}

// --------------------------------------------------------------- sections

SectionSpace h_sections(const OrderData& O, const LatticePair& P, int n) {
  const PolyRing& R = O.C->R;
  const int r = O.r;
  PolyMat adjI = pm_adj(R, P.inf.basis);
  Poly detI = pm_det(R, P.inf.basis);
  std::vector<std::vector<Laurent>> AI(r, std::vector<Laurent>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) AI[i][j] = laurent_of_upoly(R, R.mul(adjI.at(i, j), P.inf.den));
  Laurent DL = laurent_of_upoly(R, detI);

  int beta = INT_MIN / 2;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (P.inf.basis.at(i, j).is_zero()) continue;
      Laurent b = laurent_of_upoly(R, P.inf.basis.at(i, j));
      beta = std::max(beta, -O.ex[i] + laurent_topdeg(b) + P.inf.den.degree());
    }
  PolyMat adjF = pm_adj(R, P.fin.basis);
  int Nb = std::max(0, n + beta) + P.fin.den.degree() + std::max(0, adjF.max_degree()) + 1;

  // Row[i][k] = sum_j AI[i][j] x^{ex_j} Bfin[j][k] as Laurent in x
  std::vector<std::vector<Laurent>> Row(r, std::vector<Laurent>(r));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) {
      std::vector<Laurent> terms;
      for (int j = 0; j < r; ++j) {
        if (AI[i][j].p.is_zero() || P.fin.basis.at(j, k).is_zero()) continue;
        Laurent t = laurent_mul(R, AI[i][j], laurent_of_poly(R, P.fin.basis.at(j, k)));
        terms.push_back(laurent_shift(t, O.ex[j]));
      }
      if (terms.empty()) continue;
      int minoff = INT_MAX;
      for (auto& t : terms) minoff = std::min(minoff, t.off);
      Poly acc;
      for (auto& t : terms) acc = R.add(acc, R.shift(t.p, t.off - minoff));
      Row[i][k] = laurent_of_poly(R, acc);
      Row[i][k].off += minoff;
    }
  Laurent Den = laurent_shift(laurent_mul(R, DL, laurent_of_poly(R, P.fin.den)), n);
  Poly M = R.mul(DL.p, laurent_of_poly(R, P.fin.den).p);
  int dentop = laurent_topdeg(Den);

  PolyLinSystem sys(R, r, Nb);
  for (int i = 0; i < r; ++i) {
    int off = INT_MAX;
    for (int k = 0; k < r; ++k)
      if (!Row[i][k].p.is_zero()) off = std::min(off, Row[i][k].off);
    if (off == INT_MAX) continue;
    std::vector<Poly> G(r);
    for (int k = 0; k < r; ++k)
      if (!Row[i][k].p.is_zero()) G[k] = R.shift(Row[i][k].p, Row[i][k].off - off);
    sys.add_degcap(G, dentop - off);
    sys.add_congruence(std::move(G), M);
  }
  auto sols = sys.solve();
  SectionSpace out;
  out.den = P.fin.den;
  for (auto& c : sols) {
    std::vector<Poly> phi(r);
    for (int i = 0; i < r; ++i) {
      Poly acc;
      for (int k = 0; k < r; ++k) acc = R.add(acc, R.mul(P.fin.basis.at(i, k), c[k]));
      phi[i] = acc;
    }
    out.vectors.push_back(std::move(phi));
  }
  return out;
}

int h_dim(const OrderData& O, const LatticePair& P, int n) {
  return h_sections(O, P, n).dim();
}

SplittingType splitting_type(const OrderData& O, const LatticePair& P) {
  const int r = O.r;
  const int e = P.det_e;
  int n = (e >= 0 ? e / r : -((-e + r - 1) / r)) - 1;  // floor(e/r) - 1
  int guard = 0;
  while (h_dim(O, P, n) > 0) {
    n -= 1 + guard;
    require(++guard < 64, ErrorKind::Internal, "splitting scan runaway (low)");
  }
  std::vector<int> a;
  int prev = 0;
  int diff_prev = 0;
  std::vector<std::pair<int, int>> probes;
  while (static_cast<int>(a.size()) < r) {
    int hn = h_dim(O, P, n + 1);
    int diff = hn - prev;
    require(diff >= diff_prev && diff <= r, ErrorKind::Internal, "h(n) increments not monotone");
    for (int k = 0; k < diff - diff_prev; ++k) a.push_back(-(n + 1));
    probes.push_back({n + 1, hn});
    prev = hn;
    diff_prev = diff;
    ++n;
    require(n < std::abs(e) + 4 * r + 64, ErrorKind::Internal, "splitting scan runaway (high)");
  }
  std::sort(a.begin(), a.end(), std::greater<int>());
  int sum = 0;
  for (int ai : a) sum += ai;
  require(sum == e, ErrorKind::Internal, "splitting type sum mismatch with det");
  SplittingType st{a};
  for (auto& [nn, hh] : probes)
    require(st.h(nn) == hh, ErrorKind::Internal, "h(n) reconstruction mismatch");
  return st;
}

int pair_degree_on_curve(const OrderData& O, const LatticePair& P) {
  return P.chi - 1 + O.genus_total;
}

}  // namespace wobbly::bundle
