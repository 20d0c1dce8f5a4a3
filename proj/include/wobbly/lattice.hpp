#pragma once

#include <vector>

#include "wobbly/polymat.hpp"
#include "wobbly/spectral.hpp"

namespace wobbly::bundle {

using namespace wobbly::spectral;
using alg::Fp;
using alg::FpMat;
using alg::Poly;
using alg::PolyMat;
using alg::PolyRing;

// Laurent polynomial x^off * p(x), p(0) != 0 unless zero.
struct Laurent {
  Poly p;
  int off = 0;
};

Laurent laurent_of_poly(const PolyRing& R, const Poly& p);
// substitute u = 1/x into a u-polynomial
Laurent laurent_of_upoly(const PolyRing& R, const Poly& p);
Laurent laurent_mul(const PolyRing& R, const Laurent& a, const Laurent& b);
Laurent laurent_shift(const Laurent& a, int k);
int laurent_topdeg(const Laurent& a);  // degree of the top term; INT_MIN-ish for 0

// Linear solver for systems of polynomial congruences in unknown polynomial
// vectors: given rows (G_1..G_n; M) find all c with deg c_j <= degbound and
// sum_j G_j c_j = 0 mod M, plus "top degree cap" rows sum_j H_j c_j having
// degree <= cap.
struct PolyLinSystem {
  const PolyRing& R;
  int nunk;
  int degbound;
  struct CongRow {
    std::vector<Poly> G;
    Poly M;
  };
  struct CapRow {
    std::vector<Poly> H;
    int cap;
  };
  std::vector<CongRow> congs;
  std::vector<CapRow> caps;

  PolyLinSystem(const PolyRing& ring, int n, int db) : R(ring), nunk(n), degbound(db) {}
  void add_congruence(std::vector<Poly> G, Poly M) { congs.push_back({std::move(G), std::move(M)}); }
  void add_degcap(std::vector<Poly> H, int cap) { caps.push_back({std::move(H), cap}); }
  // kernel basis; each solution is a vector of nunk polynomials
  std::vector<std::vector<Poly>> solve() const;
};

// Two-chart description of the (maximal) coordinate orders of C or Ct over
// the two standard charts of the projective x-line. Finite chart: monomial
// frame {1, y} or {1, y, w, yw} over F_p[x]; infinite chart: monomial frame
// {1, eta} or {1, eta, omega, eta omega} over F_p[u], u = 1/x, with
// eta = u^(g+1) y, omega = u^(g-1) w. The infinite maximal order is computed
// by saturation at u = 0 (Round 2: trace-radical and multiplier rings).
struct OrderData {
  const HyperellipticCurve* C = nullptr;
  const SpectralCurve* S = nullptr;  // null for the base-curve order
  int r = 2;
  int genus_total = 0;  // g or 4g-3
  std::vector<int> ex;  // x-frame elt_i = x^(ex_i) * inf-frame elt_i
  // multiplication tables: tab[i][j] = coordinate vector of frame_i * frame_j
  std::vector<std::vector<std::vector<Poly>>> tab0, tabinf;
  // saturated basis of the infinite maximal order: columns / u^sat_k in the
  // infinite monomial frame
  PolyMat sat;
  int sat_k = 0;
};

OrderData make_base_order(const HyperellipticCurve& C);
OrderData make_spectral_order(const SpectralCurve& S);

// Chart lattice: columns of basis/den are coordinates in the chart's
// monomial frame; basis is kept column reduced.
struct Lat {
  PolyMat basis;
  Poly den;
};

enum class Chart { Finite, Infinite };

// normalize: popov form, monic den, content reduction
Lat lat_normalize(const OrderData& O, PolyMat gens, Poly den);
Lat lat_identity(const OrderData& O, Chart chart);
Lat lat_mul(const OrderData& O, Chart chart, const Lat& A, const Lat& B);
// inverse of a full-rank fractional ideal relative to the chart's maximal order
Lat lat_ideal_inverse(const OrderData& O, Chart chart, const Lat& I);
// membership of a frame-coordinate vector (v / den) in the lattice
bool lat_contains(const OrderData& O, const Lat& L, const std::vector<Poly>& v, const Poly& den);
// coordinates of (v / den) in the lattice basis; Internal error if not a member
std::vector<Poly> lat_coords(const OrderData& O, const Lat& L, const std::vector<Poly>& v,
                             const Poly& den);
// matrix of multiplication by frame element `idx` on the lattice (must map
// the lattice into itself)
PolyMat lat_frame_action(const OrderData& O, Chart chart, const Lat& L, int idx);

// maximal-ideal lattice of a degree-1 place, in the given chart
Lat place_ideal(const OrderData& O, Chart chart, const PlaceCt& pl);

// Lattice pair of O(D) on Ct (or O(D) on C with r = 2 places encoded as
// Split places of a null spectral structure - use the PlaceC overloads).
struct LatticePair {
  Lat fin;
  Lat inf;
  int chi = 0;    // Euler characteristic of the pushforward to P^1
  int det_e = 0;  // x-exponent of det(transition) = sum of splitting type
};

// transition bookkeeping + chi; raises Internal when the two chart modules
// are not commensurable (det of transition not a monomial)
void pair_finalize(const OrderData& O, LatticePair& P);

LatticePair lattice_of_ct(const OrderData& O, const DivisorCt& D);
LatticePair lattice_of_c(const OrderData& O, const DivisorC& D);

// sections of F(n): all phi in M0 with x^-n phi in Minf, as finite-chart
// frame-coordinate vectors over a common denominator
struct SectionSpace {
  std::vector<std::vector<Poly>> vectors;  // frame coordinates (numerators)
  Poly den;
  int dim() const { return static_cast<int>(vectors.size()); }
};
SectionSpace h_sections(const OrderData& O, const LatticePair& P, int n);
int h_dim(const OrderData& O, const LatticePair& P, int n);

struct SplittingType {
  std::vector<int> a;  // weakly decreasing
  int h(int n) const {
    int s = 0;
    for (int ai : a) s += std::max(0, ai + n + 1);
    return s;
  }
};
SplittingType splitting_type(const OrderData& O, const LatticePair& P);

// deg of a line class presented as a rank-r lattice pair is recovered from
// chi; for rank 2 on C: deg = chi - (1 - g).
int pair_degree_on_curve(const OrderData& O, const LatticePair& P);

}  // namespace wobbly::bundle
