#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wobbly/lattice.hpp"

using namespace wobbly;
using namespace wobbly::bundle;
using alg::Poly;
using alg::PolyRing;
using alg::Rng;

namespace {

HyperellipticCurve std_g2(uint32_t p = 131) {
  PolyRing R(p);
  return validate_curve(p, 2, R.from_ints({1, 0, 0, 0, 0, 1}));
}

HyperellipticCurve std_g3(uint32_t p = 131) {
  PolyRing R(p);
  return validate_curve(p, 3, R.from_ints({1, 1, 0, 0, 0, 0, 0, 1}));
}

SpectralCurve std_spec_g2(const HyperellipticCurve& C) {
  return build_spectral(C, make_quaddiff(C, C.R.from_ints({0, -17, 1}), Poly{}));
}

SpectralCurve std_spec_g3(const HyperellipticCurve& C) {
  Poly A = C.R.mul(C.R.mul(C.R.from_ints({0, 1}), C.R.from_ints({-5, 1})),
                   C.R.mul(C.R.from_ints({-11, 1}), C.R.from_ints({-15, 1})));
  return build_spectral(C, make_quaddiff(C, A, Poly{}));
}

bool lat_subset(const OrderData& O, const Lat& A, const Lat& B) {
  // every column of A lies in B
  for (int c = 0; c < A.basis.cols; ++c) {
    std::vector<Poly> v(O.r);
    for (int r = 0; r < O.r; ++r) v[r] = A.basis.at(r, c);
    if (!lat_contains(O, B, v, A.den)) return false;
  }
  return true;
}

bool lat_equal(const OrderData& O, const Lat& A, const Lat& B) {
  return lat_subset(O, A, B) && lat_subset(O, B, A);
}

}  // namespace

TEST_CASE("pushforward of O_C to the line: splitting type {0, -(g+1)}") {
  for (auto C : {std_g2(), std_g3()}) {
    OrderData O = make_base_order(C);
    LatticePair P = lattice_of_c(O, DivisorC{});
    CHECK(P.chi == 1 - C.g);
    auto st = splitting_type(O, P);
    REQUIRE(st.a.size() == 2);
    CHECK(st.a[0] == 0);
    CHECK(st.a[1] == -(C.g + 1));
    CHECK(h_dim(O, P, 0) == 1);
  }
}

TEST_CASE("pushforward of O_Ct at g=2: splitting type {0,-1,-3,-4}") {
  auto C = std_g2();
  auto S = std_spec_g2(C);
  OrderData O = make_spectral_order(S);
  LatticePair P = lattice_of_ct(O, DivisorCt{});
  CHECK(P.chi == 1 - S.genus());
  auto st = splitting_type(O, P);
  REQUIRE(st.a.size() == 4);
  CHECK(st.a == std::vector<int>({0, -1, -3, -4}));
  CHECK(h_dim(O, P, 0) == 1);
}

TEST_CASE("ideal inverse: I * I^{-1} = O on random place ideals") {
  auto C = std_g2();
  auto S = std_spec_g2(C);
  OrderData O = make_spectral_order(S);
  Rng rng(5);
  for (Chart chart : {Chart::Finite, Chart::Infinite}) {
    Lat Ord = lat_identity(O, chart);
    for (int trial = 0; trial < 6; ++trial) {
      PlaceCt pl = sample_spectral_place(S, rng);
      if (chart == Chart::Finite && pl.over_infinity()) continue;
      if (chart == Chart::Infinite && !pl.over_infinity() && pl.base.a == 0) continue;
      Lat I = place_ideal(O, chart, pl);
      Lat J = lat_ideal_inverse(O, chart, I);
      Lat prod = lat_mul(O, chart, I, J);
      CHECK(lat_equal(O, prod, Ord));
    }
  }
}

TEST_CASE("lattice h^0 agrees with the direct Riemann-Roch solver on C") {
  for (auto C : {std_g2(), std_g3()}) {
    OrderData O = make_base_order(C);
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      DivisorC D;
      int npos = (int)rng.below(2 * C.g + 2), nneg = (int)rng.below(2);
      for (int i = 0; i < npos; ++i) D.add_place(sample_place(C, rng), 1);
      for (int i = 0; i < nneg; ++i) D.add_place(sample_place(C, rng), -1);
      LatticePair P = lattice_of_c(O, D);
      CHECK(P.chi == D.degree() + 1 - C.g);
      CHECK(h_dim(O, P, 0) == rr_dim_on_C(C, D));
    }
  }
}

TEST_CASE("Riemann-Roch and Serre duality on the spectral curve") {
  auto C = std_g2();
  auto S = std_spec_g2(C);
  OrderData O = make_spectral_order(S);
  DivisorCt K = canonical_divisor_ct(S);
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    DivisorCt D;
    int d = (int)rng.below(8);
    for (int i = 0; i < d; ++i) D.add_place(sample_spectral_place(S, rng), 1);
    LatticePair P = lattice_of_ct(O, D);
    LatticePair Pd = lattice_of_ct(O, K - D);
    int h0 = h_dim(O, P, 0);
    int h1 = h_dim(O, Pd, 0);
    CHECK(h0 - h1 == D.degree() - S.genus() + 1);
  }
}

TEST_CASE("sections of h(0) are genuine members of L(D)") {
  auto C = std_g2();
  auto S = std_spec_g2(C);
  OrderData O = make_spectral_order(S);
  Rng rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    DivisorCt D;
    int d = 5 + (int)rng.below(4);
    for (int i = 0; i < d; ++i) D.add_place(sample_spectral_place(S, rng), 1);
    LatticePair P = lattice_of_ct(O, D);
    SectionSpace sec = h_sections(O, P, 0);
    CHECK(sec.dim() >= D.degree() - S.genus() + 1);
    for (int s = 0; s < std::min(2, sec.dim()); ++s) {
      FnCt fn;
      fn.e0 = make_function(C, sec.vectors[s][0], sec.vectors[s][1], sec.den);
      fn.e1 = make_function(C, sec.vectors[s][2], sec.vectors[s][3], sec.den);
      REQUIRE(!fn.is_zero());
      // ord at every place of D >= -mult
      for (auto& [pl, m] : D.mult) CHECK(ord_at_ct(S, fn, pl) >= -m);
    }
  }
}

TEST_CASE("frame action matrices: Y^2 = f, W^2 = h, commuting, both charts") {
  auto C = std_g3();
  auto S = std_spec_g3(C);
  OrderData O = make_spectral_order(S);
  const PolyRing& R = C.R;
  Rng rng(17);
  DivisorCt D;
  for (int i = 0; i < 3; ++i) D.add_place(sample_spectral_place(S, rng), 1);
  LatticePair P = lattice_of_ct(O, D);
  for (Chart chart : {Chart::Finite, Chart::Infinite}) {
    const Lat& L = (chart == Chart::Finite) ? P.fin : P.inf;
    PolyMat Y = lat_frame_action(O, chart, L, 1);
    PolyMat W = lat_frame_action(O, chart, L, 2);
    PolyMat Y2 = pm_mul(R, Y, Y);
    Poly sq = (chart == Chart::Finite) ? C.f : C.f_star_u();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Poly expect = (i == j) ? sq : Poly{};
        CHECK(Y2.at(i, j) == expect);
      }
    // W^2 = ha + hb * Y in the chart coordinates
    Poly ha, hb;
    if (chart == Chart::Finite) {
      ha = S.q.A;
      hb = S.q.B;
    } else {
      int g = C.g;
      ha.c.assign(2 * g - 1, 0);
      for (int i = 0; i <= S.q.A.degree(); ++i) ha.c[2 * g - 2 - i] = S.q.A.c[i];
      ha.trim();
      if (!S.q.B.is_zero()) {
        hb.c.assign(std::max(1, g - 2), 0);
        for (int i = 0; i <= S.q.B.degree(); ++i) hb.c[g - 3 - i] = S.q.B.c[i];
        hb.trim();
      }
    }
    PolyMat W2 = pm_mul(R, W, W);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Poly expect = R.mul(hb, Y.at(i, j));
        if (i == j) expect = R.add(expect, ha);
        CHECK(W2.at(i, j) == expect);
      }
    PolyMat YW = pm_mul(R, Y, W);
    PolyMat WY = pm_mul(R, W, Y);
    for (size_t i = 0; i < YW.e.size(); ++i) CHECK(YW.e[i] == WY.e[i]);
  }
}

TEST_CASE("corrupted lattice is rejected by the chi consistency check") {
  auto C = std_g2();
  auto S = std_spec_g2(C);
  OrderData O = make_spectral_order(S);
  Rng rng(23);
  DivisorCt D;
  for (int i = 0; i < 3; ++i) D.add_place(sample_spectral_place(S, rng), 1);
  LatticePair P = lattice_of_ct(O, D);
  // corrupt one transition-relevant entry and re-finalize
  LatticePair Q = P;
  Q.fin.basis.at(0, 0) = C.R.add(Q.fin.basis.at(0, 0), C.R.from_ints({0, 0, 7}));
  bool caught = false;
  try {
    pair_finalize(O, Q);
    if (Q.chi != D.degree() + 1 - O.genus_total) caught = true;
  } catch (const Error&) {
    caught = true;
  }
  CHECK(caught);
}
