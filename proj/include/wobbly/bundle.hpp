#pragma once

#include <memory>
#include <optional>

#include "wobbly/lattice.hpp"

namespace wobbly::bundle {

// Shared context: a validated spectral curve together with the maximal
// orders of both function fields in the two standard charts. OrderData holds
// pointers into this object, so it is pinned in place.
struct SpectralCtx {
  SpectralCurve S;
  OrderData Ot;  // rank-4 order of Ct
  OrderData Ob;  // rank-2 order of C

  SpectralCtx(const HyperellipticCurve& C, const QuadDifferential& q) : S(build_spectral(C, q)) {
    Ot = make_spectral_order(S);
    Ob = make_base_order(S.base);
  }
  SpectralCtx(const SpectralCtx&) = delete;
  SpectralCtx& operator=(const SpectralCtx&) = delete;

  const HyperellipticCurve& C() const { return S.base; }
};

// Line bundle class on C, held as a divisor representative.
struct LineClass {
  DivisorC rep;

  int degree() const { return rep.degree(); }
  static LineClass trivial() { return {}; }
  static LineClass of(DivisorC d) { return {std::move(d)}; }
  static LineClass canonical(const HyperellipticCurve& C) {
    return {DivisorC::single(PlaceC::infinity(), 2 * C.g - 2)};
  }
  LineClass operator+(const LineClass& o) const { return {rep + o.rep}; }
  LineClass operator-(const LineClass& o) const { return {rep - o.rep}; }
};

// true iff the class of the representative divisor is principal (degree 0
// and h^0 = 1), decided through the lattice engine
bool iso_trivial(const SpectralCtx& ctx, const LineClass& c);

// E = pi_*(pi^* L tensor O(Dt)) with its Higgs structure and the marked
// canonical injection iota = 1: L -> E vanishing exactly on Dt.
struct HiggsBundleData {
  DivisorCt Dt;    // Baker-Akhiezer part of the presentation
  LineClass L;     // twisting line bundle on C
  DivisorCt Dtot;  // pi^* L.rep + Dt
  LatticePair lat;
  PolyMat Y0, W0;      // y- and w-action on the finite chart (exact)
  PolyMat Yinf, Winf;  // eta- and omega-action on the infinite chart
  FnCt iota;           // marked injection as a function-field element
  int degE = 0;        // degree of E as a bundle on C

  int lambda() const { return degE; }  // deg Lambda = deg det E = deg E
};

HiggsBundleData direct_image(const SpectralCtx& ctx, const LineClass& L, const DivisorCt& Dt);

// Hom(L', E) = H^0(Ct, O(Dtot - pi^* L'.rep)): dimension and the injections
// as function-field elements.
struct HomSpace {
  int dim = 0;
  std::vector<FnCt> sections;
};
HomSpace hom_line_to_E(const SpectralCtx& ctx, const HiggsBundleData& E, const LineClass& Lp);

// Vanishing divisor of the composite pi^* L' -> pi^* E -> L_(E,phi) attached
// to the injection psi: equals div(psi) + Dtot - pi^*(L'.rep).
DivisorCt baker_akhiezer_divisor(const SpectralCtx& ctx, const HiggsBundleData& E,
                                 const LineClass& Lp, const FnCt& psi);
// .. for the marked injection
DivisorCt baker_akhiezer_divisor(const SpectralCtx& ctx, const HiggsBundleData& E);

// Honest divisor of det(E) on C, extracted from the wedge ideal of the
// lattice in both charts (det E = O of the returned divisor, exactly).
DivisorC det_divisor(const SpectralCtx& ctx, const HiggsBundleData& E);

// c_i(phi) = i wedge phi(i), a section of K_C L^-2 Lambda; returns its norm
// function nu = Nm(iota) and the zero divisor D_i(phi).
struct CSection {
  FunctionOnC nu;
  DivisorC divisor;
  DivisorC det_div;  // det divisor used for the twist bookkeeping
};
CSection c_section(const SpectralCtx& ctx, const HiggsBundleData& E);

// Sections sigma parameterizing nilpotent Higgs fields with kernel i(L):
// sigma ranges over L((2g-2) inf + 2 L.rep - det_div), which realizes
// H^0(C, K_C L^2 Lambda^-1).
struct NilpotentSpace {
  DivisorC bracket;  // the divisor above
  std::vector<FunctionOnC> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};
NilpotentSpace nilpotent_space(const SpectralCtx& ctx, const HiggsBundleData& E);

// Exact chart matrices of the nilpotent Higgs field attached to sigma (in
// the dx/y trivialization of K_C). On the infinite chart the stored matrix
// is u^(g-1) times the action, which is polynomial.
struct NilpotentField {
  PolyMat N0, Ninf;
  FunctionOnC sigma;
};
NilpotentField construct_nilpotent(const SpectralCtx& ctx, const HiggsBundleData& E,
                                   const FunctionOnC& sigma);

// Prop. 3/4 round trip: a Q-special q with div(q) >= D_i gives sigma = q / c
// and hence a nilpotent field; conversely a nilpotent field recovers q with
// div(q) = D_i + div(sigma). quad_from_nilpotent recovers sigma from the
// matrices (not from the input sigma) before multiplying back.
NilpotentField nilpotent_from_quad(const SpectralCtx& ctx, const HiggsBundleData& E,
                                   const QuadDifferential& q);
QuadDifferential quad_from_nilpotent(const SpectralCtx& ctx, const HiggsBundleData& E,
                                     const NilpotentField& phi);

// Randomized bounded search for a destabilizing sub-line bundle. A result is
// a checked certificate; NoneFound is not a semistability proof.
struct Destabilizer {
  LineClass L;
  FnCt witness;
  int hom_dim = 0;
};
struct DestabilizerSearch {
  std::optional<Destabilizer> found;
  int degrees_tried = 0;
  int candidates_tried = 0;
};
DestabilizerSearch destabilizer_search(const SpectralCtx& ctx, const HiggsBundleData& E,
                                       int effort, uint64_t seed);

enum class HHLimit { VeryStableLimit, WobblyLimit };
// Theorem-1 predicate for unstable pushforwards (deg Dt < 2g-2): the limit
// is very stable iff Dt is reduced. The instability is certified by the
// canonical destabilizer L_E.
struct HHLimitReport {
  HHLimit verdict;
  bool destabilizer_certified;
  int hom_dim;
};
HHLimitReport hh_limit_status(const SpectralCtx& ctx, const LineClass& L_E, const DivisorCt& Dt);

// dim H^0(C, K_C L^2 Lambda^-1) computed through the lattice engine (route
// independent of qspecial_system).
int theorem2_dim_lattice(const SpectralCtx& ctx, const HiggsBundleData& E);

// section vectors of h^0(O(Dt)) as function-field elements
std::vector<FnCt> global_sections_ct(const SpectralCtx& ctx, const DivisorCt& Dt);
int h0_ct(const SpectralCtx& ctx, const DivisorCt& Dt);
int h0_c(const SpectralCtx& ctx, const DivisorC& D);

}  // namespace wobbly::bundle
