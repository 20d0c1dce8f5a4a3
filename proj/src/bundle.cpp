#include "wobbly/bundle.hpp"

#include <algorithm>
#include <array>
#include <climits>

namespace wobbly::bundle {

using namespace wobbly::alg;

bool iso_trivial(const SpectralCtx& ctx, const LineClass& c) {
  if (c.degree() != 0) return false;
  LatticePair P = lattice_of_c(ctx.Ob, c.rep);
  return h_dim(ctx.Ob, P, 0) == 1;
}

int h0_c(const SpectralCtx& ctx, const DivisorC& D) {
  LatticePair P = lattice_of_c(ctx.Ob, D);
  return h_dim(ctx.Ob, P, 0);
}

int h0_ct(const SpectralCtx& ctx, const DivisorCt& Dt) {
  LatticePair P = lattice_of_ct(ctx.Ot, Dt);
  return h_dim(ctx.Ot, P, 0);
}

std::vector<FnCt> global_sections_ct(const SpectralCtx& ctx, const DivisorCt& Dt) {
  LatticePair P = lattice_of_ct(ctx.Ot, Dt);
  SectionSpace sec = h_sections(ctx.Ot, P, 0);
  std::vector<FnCt> out;
  for (auto& v : sec.vectors) {
    FnCt fn;
    fn.e0 = make_function(ctx.C(), v[0], v[1], sec.den);
    fn.e1 = make_function(ctx.C(), v[2], v[3], sec.den);
    out.push_back(std::move(fn));
  }
  return out;
}

HiggsBundleData direct_image(const SpectralCtx& ctx, const LineClass& L, const DivisorCt& Dt) {
  HiggsBundleData E;
  E.Dt = Dt;
  E.L = L;
  E.Dtot = pullback_divisor(ctx.S, L.rep) + Dt;
  E.lat = lattice_of_ct(ctx.Ot, E.Dtot);
  E.Y0 = lat_frame_action(ctx.Ot, Chart::Finite, E.lat.fin, 1);
  E.W0 = lat_frame_action(ctx.Ot, Chart::Finite, E.lat.fin, 2);
  E.Yinf = lat_frame_action(ctx.Ot, Chart::Infinite, E.lat.inf, 1);
  E.Winf = lat_frame_action(ctx.Ot, Chart::Infinite, E.lat.inf, 2);
  E.iota = FnCt{make_function(ctx.C(), ctx.C().R.one(), Poly{}, ctx.C().R.one()),
                FunctionOnC{Poly{}, Poly{}, ctx.C().R.one()}};
  int gt = ctx.S.genus(), g = ctx.C().g;
  E.degE = (E.lat.chi - 1 + gt) - (2 * g - 2);  // deg L_tot - (2g - 2)
  require(E.degE == 2 * L.degree() + Dt.degree() - (2 * g - 2), ErrorKind::Internal,
          "degree bookkeeping for the direct image");
  return E;
}

HomSpace hom_line_to_E(const SpectralCtx& ctx, const HiggsBundleData& E, const LineClass& Lp) {
  DivisorCt M = E.Dtot - pullback_divisor(ctx.S, Lp.rep);
  HomSpace out;
  out.sections = global_sections_ct(ctx, M);
  out.dim = static_cast<int>(out.sections.size());
  return out;
}

DivisorCt baker_akhiezer_divisor(const SpectralCtx& ctx, const HiggsBundleData& E,
                                 const LineClass& Lp, const FnCt& psi) {
  require(!psi.is_zero(), ErrorKind::BadInput, "zero injection");
  DivisorCt M = E.Dtot - pullback_divisor(ctx.S, Lp.rep);
  DivisorCt D = divisor_of_fnct(ctx.S, psi) + M;
  require(D.effective(), ErrorKind::Internal, "Baker-Akhiezer divisor not effective");
  return D;
}

DivisorCt baker_akhiezer_divisor(const SpectralCtx& ctx, const HiggsBundleData& E) {
  return baker_akhiezer_divisor(ctx, E, E.L, E.iota);
}

// u-frame pair (p + q eta)/den as a function on C
static FunctionOnC upair_to_function(const HyperellipticCurve& C, const Poly& p, const Poly& q,
                                     const Poly& den) {
  const PolyRing& R = C.R;
  int g = C.g;
  int M = std::max({p.degree(), q.degree() + g + 1, den.degree(), 0});
  auto lift = [&](const Poly& a, int extra) {
    if (a.is_zero()) return Poly{};
    return R.shift(R.reverse(a), M - extra - a.degree());
  };
  return make_function(C, lift(p, 0), lift(q, g + 1), lift(den, 0));
}

DivisorC det_divisor(const SpectralCtx& ctx, const HiggsBundleData& E) {
  const HyperellipticCurve& C = ctx.C();
  const PolyRing& R = C.R;
  const int g = C.g;

  // Wedge generators of det(E) as a rank-1 module over C, per chart. The
  // infinite side is rescaled by u^(g-1) so both charts hold coordinates
  // against the global frame (1 ^ w).
  auto wedge_chart = [&](const Lat& L, bool infinite) {
    Poly sq = infinite ? C.f_star_u() : C.f;
    auto mul2 = [&](std::pair<Poly, Poly> a, std::pair<Poly, Poly> b) {
      return std::pair<Poly, Poly>{
          R.add(R.mul(a.first, b.first), R.mul(R.mul(a.second, b.second), sq)),
          R.add(R.mul(a.first, b.second), R.mul(a.second, b.first))};
    };
    std::vector<std::pair<Poly, Poly>> av, bv;
    for (int c = 0; c < 4; ++c) {
      av.push_back({L.basis.at(0, c), L.basis.at(1, c)});
      bv.push_back({L.basis.at(2, c), L.basis.at(3, c)});
    }
    PolyMat gens(2, 6);
    int cidx = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j, ++cidx) {
        auto w1 = mul2(av[i], bv[j]);
        auto w2 = mul2(av[j], bv[i]);
        Poly w0 = R.sub(w1.first, w2.first);
        Poly wy = R.sub(w1.second, w2.second);
        if (infinite) {
          w0 = R.shift(w0, g - 1);
          wy = R.shift(wy, g - 1);
        }
        gens.at(0, cidx) = w0;
        gens.at(1, cidx) = wy;
      }
    return lat_normalize(ctx.Ob, std::move(gens), R.mul(L.den, L.den));
  };
  LatticePair J;
  J.fin = wedge_chart(E.lat.fin, false);
  J.inf = wedge_chart(E.lat.inf, true);
  pair_finalize(ctx.Ob, J);

  // extract the divisor: at each place D_P = -(min ord over the generators)
  DivisorC D;
  Poly detJ = pm_det(R, J.fin.basis);
  std::vector<uint32_t> xs = R.roots(R.mul(detJ, J.fin.den));
  for (uint32_t a : xs) {
    bool rational = true;
    auto pls = places_over_x(C, a, &rational);
    int vdet = R.root_multiplicity(detJ, a) - 2 * R.root_multiplicity(J.fin.den, a);
    if (!rational) {
      if (vdet != 0)
        fail(ErrorKind::IrrationalSupport, "det divisor over x = " + std::to_string(a));
      continue;
    }
    int seen = 0;
    for (const PlaceC& pl : pls) {
      int m = INT_MAX;
      for (int c = 0; c < 2; ++c) {
        FunctionOnC fc = make_function(C, J.fin.basis.at(0, c), J.fin.basis.at(1, c), J.fin.den);
        if (fc.is_zero()) continue;
        m = std::min(m, ord_at(C, fc, pl));
      }
      require(m < INT_MAX, ErrorKind::Internal, "det ideal degenerate");
      if (m != 0) D.add_place(pl, -m);
      seen += m;
    }
    require(seen == vdet, ErrorKind::Internal, "det divisor fiber accounting");
  }
  int minf = INT_MAX;
  for (int c = 0; c < 2; ++c) {
    FunctionOnC fc = upair_to_function(C, J.inf.basis.at(0, c), J.inf.basis.at(1, c), J.inf.den);
    if (fc.is_zero()) continue;
    minf = std::min(minf, ord_at(C, fc, PlaceC::infinity()));
  }
  require(minf < INT_MAX, ErrorKind::Internal, "det ideal degenerate at infinity");
  if (minf != 0) D.add_place(PlaceC::infinity(), -minf);
  require(D.degree() == pair_degree_on_curve(ctx.Ob, J), ErrorKind::Internal,
          "det divisor degree disagrees with chi");
  return D;
}

CSection c_section(const SpectralCtx& ctx, const HiggsBundleData& E) {
  const HyperellipticCurve& C = ctx.C();
  auto ps = pullback_summand(ctx.S, E.Dt);
  if (!ps.P.is_zero())
    fail(ErrorKind::DegenerateInjection, "the marked injection vanishes on " + ps.P.to_string());
  CSection out;
  out.nu = fnct_norm(ctx.S, E.iota);
  out.det_div = det_divisor(ctx, E);
  DivisorC D;
  bool nu_const = out.nu.A.degree() == 0 && out.nu.B.is_zero() && out.nu.den.degree() == 0;
  if (!nu_const) D = divisor_of_function(C, out.nu);
  D += DivisorC::single(PlaceC::infinity(), 2 * C.g - 2);
  D += out.det_div;
  D += E.L.rep.scaled(-2);
  require(D.effective(), ErrorKind::Internal, "c-section divisor not effective");
  out.divisor = D;
  return out;
}

NilpotentSpace nilpotent_space(const SpectralCtx& ctx, const HiggsBundleData& E) {
  const HyperellipticCurve& C = ctx.C();
  NilpotentSpace out;
  out.bracket = DivisorC::single(PlaceC::infinity(), 2 * C.g - 2) + E.L.rep.scaled(2) -
                det_divisor(ctx, E);
  out.basis = rr_space_on_C(C, out.bracket);
  return out;
}

int theorem2_dim_lattice(const SpectralCtx& ctx, const HiggsBundleData& E) {
  const HyperellipticCurve& C = ctx.C();
  DivisorC bracket = DivisorC::single(PlaceC::infinity(), 2 * C.g - 2) + E.L.rep.scaled(2) -
                     det_divisor(ctx, E);
  LatticePair P = lattice_of_c(ctx.Ob, bracket);
  return h_dim(ctx.Ob, P, 0);
}

// ---------------------------------------------------------------- nilpotents

NilpotentField construct_nilpotent(const SpectralCtx& ctx, const HiggsBundleData& E,
                                   const FunctionOnC& sigma) {
  const HyperellipticCurve& C = ctx.C();
  const PolyRing& R = C.R;
  const int g = C.g;
  require(!sigma.is_zero(), ErrorKind::BadInput, "zero section");

  // phi_n(e) = sigma * wedge(e, iota) * iota (x) dx/y, F-linear of rank one.
  // With iota = i0 + i1 w and lambda(e) = e0 i1 - e1 i0:
  //   phi_n(1) = sigma i1 iota,   phi_n(y)  = sigma y i1 iota,
  //   phi_n(w) = -sigma i0 iota,  phi_n(yw) = -sigma y i0 iota.
  FunctionOnC i0 = E.iota.e0, i1 = E.iota.e1;
  FunctionOnC yfn = make_function(C, Poly{}, R.one(), R.one());
  std::vector<FunctionOnC> lam = {i1, fn_mul(C, yfn, i1), fn_scale(C, i0, R.F.neg(1)),
                                  fn_scale(C, fn_mul(C, yfn, i0), R.F.neg(1))};
  // frame-coordinate images over the function field of the x-line: column j
  // holds the 4 coordinates of phi_n(frame_j), each (poly, den) in x
  std::vector<std::array<Poly, 4>> colnum(4);
  std::vector<Poly> colden(4);
  for (int j = 0; j < 4; ++j) {
    FunctionOnC s0 = fn_mul(C, fn_mul(C, sigma, lam[j]), i0);
    FunctionOnC s1 = fn_mul(C, fn_mul(C, sigma, lam[j]), i1);
    Poly den = R.mul(s0.den, s1.den);
    colnum[j] = {R.mul(s0.A, s1.den), R.mul(s0.B, s1.den), R.mul(s1.A, s0.den),
                 R.mul(s1.B, s0.den)};
    colden[j] = den;
  }
  NilpotentField out;
  out.sigma = sigma;
  // finite chart
  {
    const Lat& L = E.lat.fin;
    PolyMat N(4, 4);
    Poly den = R.one();
    for (int j = 0; j < 4; ++j) den = R.mul(den, colden[j]);
    for (int k = 0; k < 4; ++k) {
      std::vector<Poly> num(4);
      for (int i = 0; i < 4; ++i) {
        Poly acc;
        for (int j = 0; j < 4; ++j) {
          if (L.basis.at(j, k).is_zero() || colnum[j][i].is_zero()) continue;
          Poly term = R.mul(L.basis.at(j, k), colnum[j][i]);
          acc = R.add(acc, R.mul(term, R.quo(den, colden[j])));
        }
        num[i] = acc;
      }
      std::vector<Poly> coords;
      try {
        coords = lat_coords(ctx.Ot, L, num, R.mul(den, L.den));
      } catch (const Error&) {
        fail(ErrorKind::NotQSpecial, "section does not define an integral nilpotent field");
      }
      for (int i = 0; i < 4; ++i) N.at(i, k) = coords[i];
    }
    out.N0 = N;
  }
  // infinite chart; the stored matrix is u^(g-1) * (action in the inf basis)
  {
    const Lat& L = E.lat.inf;
    PolyMat N(4, 4);
    Poly denx = R.one();
    for (int j = 0; j < 4; ++j) denx = R.mul(denx, colden[j]);
    int dd = denx.degree();
    Poly den_u = R.reverse(denx);  // u^dd * denx(1/u)
    int maxex = 0;
    for (int e : ctx.Ot.ex) maxex = std::max(maxex, e);
    int base = 2 * maxex + dd;
    for (int k = 0; k < 4; ++k) {
      std::vector<Poly> num(4);
      for (int i = 0; i < 4; ++i) {
        // coords_i = sum_j Lcol[j](u) * u^{ex_j - ex_i} * Nij(1/u),
        // Nij = colnum[j][i] * (denx / colden[j]); cleared by u^base
        Poly acc;
        for (int j = 0; j < 4; ++j) {
          if (L.basis.at(j, k).is_zero() || colnum[j][i].is_zero()) continue;
          Poly Nij = R.mul(colnum[j][i], R.quo(denx, colden[j]));
          int off = ctx.Ot.ex[j] - ctx.Ot.ex[i] - Nij.degree() + base;
          require(off >= 0, ErrorKind::Internal, "u-exponent clearing failed");
          acc = R.add(acc, R.mul(L.basis.at(j, k), R.shift(R.reverse(Nij), off)));
        }
        num[i] = R.shift(acc, g - 1);  // the u^(g-1) twist
      }
      Poly denom = R.mul(R.monomial(base), R.mul(den_u, L.den));
      std::vector<Poly> coords;
      try {
        coords = lat_coords(ctx.Ot, L, num, denom);
      } catch (const Error&) {
        fail(ErrorKind::NotQSpecial,
             "section does not define an integral nilpotent field at infinity");
      }
      for (int i = 0; i < 4; ++i) N.at(i, k) = coords[i];
    }
    out.Ninf = N;
  }
  for (const PolyMat* M : {&out.N0, &out.Ninf}) {
    PolyMat sq = pm_mul(R, *M, *M);
    for (const Poly& e : sq.e) require(e.is_zero(), ErrorKind::Internal, "phi_n^2 != 0");
  }
  return out;
}

NilpotentField nilpotent_from_quad(const SpectralCtx& ctx, const HiggsBundleData& E,
                                   const QuadDifferential& q) {
  const HyperellipticCurve& C = ctx.C();
  require(!q.is_zero(), ErrorKind::BadInput, "zero quadratic differential");
  CSection cs = c_section(ctx, E);
  FunctionOnC qf = make_function(C, q.A, q.B, C.R.one());
  for (auto& [pl, m] : cs.divisor.mult) {
    if (m <= 0) continue;
    int v = ord_at(C, qf, pl);
    if (pl.is_infinite()) v += 4 * C.g - 4;
    if (v < m) fail(ErrorKind::NotQSpecial, "div(q) does not dominate the c-section divisor");
  }
  FunctionOnC sigma = fn_mul(C, qf, fn_inv(C, cs.nu));
  return construct_nilpotent(ctx, E, sigma);
}

QuadDifferential quad_from_nilpotent(const SpectralCtx& ctx, const HiggsBundleData& E,
                                     const NilpotentField& phi) {
  const HyperellipticCurve& C = ctx.C();
  const PolyRing& R = C.R;
  // recover sigma from the finite-chart matrix alone: apply N0 to a basis
  // column with nonzero wedge against iota and divide out
  FunctionOnC i0 = E.iota.e0, i1 = E.iota.e1;
  FunctionOnC sigma_rec;
  bool got = false;
  for (int k = 0; k < 4 && !got; ++k) {
    FunctionOnC e0 =
        make_function(C, E.lat.fin.basis.at(0, k), E.lat.fin.basis.at(1, k), E.lat.fin.den);
    FunctionOnC e1 =
        make_function(C, E.lat.fin.basis.at(2, k), E.lat.fin.basis.at(3, k), E.lat.fin.den);
    FunctionOnC lam = fn_add(C, fn_mul(C, e0, i1), fn_scale(C, fn_mul(C, e1, i0), R.F.neg(1)));
    if (lam.is_zero()) continue;
    std::vector<Poly> zc(4);
    for (int i = 0; i < 4; ++i) {
      Poly acc;
      for (int j = 0; j < 4; ++j)
        acc = R.add(acc, R.mul(E.lat.fin.basis.at(i, j), phi.N0.at(j, k)));
      zc[i] = acc;
    }
    FunctionOnC z0 = make_function(C, zc[0], zc[1], E.lat.fin.den);
    FunctionOnC z1 = make_function(C, zc[2], zc[3], E.lat.fin.den);
    if (!i0.is_zero() && !z0.is_zero()) {
      sigma_rec = fn_mul(C, z0, fn_inv(C, fn_mul(C, lam, i0)));
      got = true;
    } else if (!i1.is_zero() && !z1.is_zero()) {
      sigma_rec = fn_mul(C, z1, fn_inv(C, fn_mul(C, lam, i1)));
      got = true;
    }
  }
  require(got, ErrorKind::Internal, "could not recover sigma from the matrices");
  CSection cs = c_section(ctx, E);
  FunctionOnC qf = fn_mul(C, sigma_rec, cs.nu);
  require(qf.den.degree() == 0 && qf.B.degree() <= C.g - 3 && qf.A.degree() <= 2 * C.g - 2,
          ErrorKind::Internal, "recovered q is not a quadratic differential");
  uint32_t dinv = R.F.inv(qf.den.coeff(0));
  return make_quaddiff(C, R.scale(qf.A, dinv), R.scale(qf.B, dinv));
}

// ---------------------------------------------------------------- stability

DestabilizerSearch destabilizer_search(const SpectralCtx& ctx, const HiggsBundleData& E,
                                       int effort, uint64_t seed) {
  const int g = ctx.C().g;
  DestabilizerSearch out;
  // violating degrees d: 2d > deg E; Hom vanishes once 2d > deg E + 2g-2
  int dmin = (E.degE >= 0) ? E.degE / 2 + 1 : -((-E.degE) / 2);
  while (2 * dmin <= E.degE) ++dmin;
  while (2 * (dmin - 1) > E.degE) --dmin;
  int dmax = (E.degE + 2 * g - 2) / 2;
  if (dmax < dmin) return out;

  auto check = [&](const LineClass& Lp) -> bool {
    if (2 * Lp.degree() <= E.degE || Lp.degree() > dmax) return false;
    ++out.candidates_tried;
    HomSpace hom;
    try {
      hom = hom_line_to_E(ctx, E, Lp);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InertPlace) return false;
      throw;
    }
    if (hom.dim == 0) return false;
    // independent re-verification of the certificate by series valuations
    const FnCt& psi = hom.sections.front();
    DivisorCt M = E.Dtot - pullback_divisor(ctx.S, Lp.rep);
    for (auto& [pl, m] : M.mult)
      require(ord_at_ct(ctx.S, psi, pl) >= -m, ErrorKind::Internal,
              "destabilizer certificate failed series re-verification");
    out.found = Destabilizer{Lp, psi, hom.dim};
    return true;
  };

  std::vector<LineClass> tier0;
  tier0.push_back(LineClass::trivial());
  tier0.push_back(E.L);
  auto ps = pullback_summand(ctx.S, E.Dt.positive_part());
  if (!ps.P.is_zero()) {
    tier0.push_back(LineClass::of(ps.P));
    tier0.push_back(E.L + LineClass::of(ps.P));
  }
  for (const LineClass& c : tier0)
    if (check(c)) return out;

  Rng rng(seed);
  auto sample_base = [&]() {
    return norm_divisor(ctx.S, DivisorCt::single(sample_spectral_place(ctx.S, rng)))
        .mult.begin()
        ->first;
  };
  for (int d = dmin; d <= dmax; ++d) {
    ++out.degrees_tried;
    for (int trial = 0; trial < effort; ++trial) {
      int extra = static_cast<int>(rng.below(2));
      DivisorC rep;
      for (int i = 0; i < d + extra; ++i) rep.add_place(sample_base(), 1);
      for (int i = 0; i < extra; ++i) rep.add_place(sample_base(), -1);
      if (rep.degree() != d) continue;
      if (check(LineClass::of(rep))) return out;
    }
  }
  return out;
}

HHLimitReport hh_limit_status(const SpectralCtx& ctx, const LineClass& L_E, const DivisorCt& Dt) {
  const int g = ctx.C().g;
  require(Dt.effective(), ErrorKind::BadInput, "effective divisor required");
  if (Dt.degree() >= 2 * g - 2)
    fail(ErrorKind::RegimeError,
         "deg Dt = " + std::to_string(Dt.degree()) + " is not < 2g-2 (unstable regime)");
  HiggsBundleData E = direct_image(ctx, L_E, Dt);
  HomSpace hom = hom_line_to_E(ctx, E, L_E);
  HHLimitReport rep;
  rep.hom_dim = hom.dim;
  rep.destabilizer_certified = hom.dim >= 1 && 2 * L_E.degree() > E.degE;
  rep.verdict = Dt.reduced() ? HHLimit::VeryStableLimit : HHLimit::WobblyLimit;
  return rep;
}

}  // namespace wobbly::bundle
