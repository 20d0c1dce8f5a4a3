#include "wobbly/lab.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <thread>

namespace wobbly::lab {

using namespace wobbly::alg;
using json = nlohmann::ordered_json;

// ------------------------------------------------------------------ file IO

HyperellipticCurve curve_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadInput, std::string("curve file: ") + e.what());
  }
  require(j.contains("p") && j.contains("genus") && j.contains("f"), ErrorKind::BadInput,
          "curve file needs p, genus, f");
  uint32_t p = j["p"].get<uint32_t>();
  int g = j["genus"].get<int>();
  std::vector<long long> cs = j["f"].get<std::vector<long long>>();
  require(p >= 3, ErrorKind::InvalidCurve, "p must be an odd prime");
  return validate_curve(p, g, PolyRing(p).from_ints(cs));
}

std::string curve_to_json(const HyperellipticCurve& C) {
  json j;
  j["p"] = C.p;
  j["genus"] = C.g;
  j["f"] = C.f.c;
  return j.dump();
}

QuadDifferential quaddiff_from_json(const HyperellipticCurve& C, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadInput, std::string("quadratic differential file: ") + e.what());
  }
  require(j.contains("A"), ErrorKind::BadInput, "quadratic differential file needs A");
  Poly A = C.R.from_ints(j["A"].get<std::vector<long long>>());
  Poly B;
  if (j.contains("B")) B = C.R.from_ints(j["B"].get<std::vector<long long>>());
  require(A.degree() <= 2 * C.g - 2, ErrorKind::BadInput, "deg A exceeds 2g-2");
  require(B.degree() <= C.g - 3, ErrorKind::BadInput, "deg B exceeds g-3");
  return QuadDifferential{A, B};
}

std::string quaddiff_to_json(const QuadDifferential& q) {
  json j;
  j["A"] = q.A.c;
  j["B"] = q.B.c;
  return j.dump();
}

static PlaceC place_c_from_entry(const HyperellipticCurve& C, const json& e) {
  std::string kind = e.at("kind").get<std::string>();
  if (kind == "infinity") return PlaceC::infinity();
  uint32_t x = C.R.F.reduce_int(e.at("x").get<long long>());
  if (kind == "weierstrass") {
    require(C.R.eval(C.f, x) == 0, ErrorKind::BadInput,
            "x = " + std::to_string(x) + " is not a Weierstrass x-value");
    return PlaceC::weierstrass(x);
  }
  require(kind == "finite", ErrorKind::BadInput, "unknown place kind " + kind);
  uint32_t y = C.R.F.reduce_int(e.at("y").get<long long>());
  require(C.R.F.mul(y, y) == C.R.eval(C.f, x), ErrorKind::BadInput, "(x, y) not on the curve");
  require(y != 0, ErrorKind::BadInput, "finite place needs y != 0 (use weierstrass)");
  return PlaceC::finite(x, y);
}

DivisorC divisor_c_from_json(const HyperellipticCurve& C, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadInput, std::string("divisor file: ") + e.what());
  }
  require(j.contains("places"), ErrorKind::BadInput, "divisor file needs places");
  DivisorC D;
  for (const auto& e : j["places"]) {
    int m = e.contains("mult") ? e["mult"].get<int>() : 1;
    D.add_place(place_c_from_entry(C, e), m);
  }
  return D;
}

static json place_c_entry(const PlaceC& pl, int m) {
  json e;
  switch (pl.kind) {
    case PlaceKind::Finite:
      e["kind"] = "finite";
      e["x"] = pl.a;
      e["y"] = pl.b;
      break;
    case PlaceKind::Weierstrass:
      e["kind"] = "weierstrass";
      e["x"] = pl.a;
      break;
    case PlaceKind::Infinity:
      e["kind"] = "infinity";
      break;
  }
  e["mult"] = m;
  return e;
}

std::string divisor_c_to_json(const DivisorC& D) {
  json j;
  j["places"] = json::array();
  for (auto& [pl, m] : D.mult) j["places"].push_back(place_c_entry(pl, m));
  return j.dump();
}

DivisorCt divisor_ct_from_json(const SpectralCurve& S, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadInput, std::string("spectral divisor file: ") + e.what());
  }
  require(j.contains("places"), ErrorKind::BadInput, "spectral divisor file needs places");
  const Fp& F = S.base.R.F;
  DivisorCt D;
  for (const auto& e : j["places"]) {
    int m = e.contains("mult") ? e["mult"].get<int>() : 1;
    std::string kind = e.at("kind").get<std::string>();
    if (kind == "ramified") {
      PlaceC base = PlaceC::infinity();
      if (e.contains("x")) {
        uint32_t x = F.reduce_int(e.at("x").get<long long>());
        if (S.base.R.eval(S.base.f, x) == 0) {
          base = PlaceC::weierstrass(x);
        } else {
          require(e.contains("y"), ErrorKind::BadInput, "ramified finite place needs y");
          uint32_t y = F.reduce_int(e.at("y").get<long long>());
          require(F.mul(y, y) == S.base.R.eval(S.base.f, x), ErrorKind::BadInput,
                  "(x, y) not on the curve");
          base = PlaceC::finite(x, y);
        }
      }
      if (base.is_infinite()) {
        require(S.inf_ord == 1, ErrorKind::BadInput, "infinity is not a branch point here");
      } else {
        require(h_value(S, base) == 0, ErrorKind::BadInput,
                base.to_string() + " is not a branch point");
      }
      D.add_place(PlaceCt::ramified(base), m);
      continue;
    }
    require(e.contains("w"), ErrorKind::BadInput, "split place needs w");
    uint32_t w = F.reduce_int(e.at("w").get<long long>());
    if (kind == "infinity") {
      require(S.inf_ord == 0 && S.inf_split, ErrorKind::BadInput,
              "no split places over infinity on this spectral curve");
      require(F.mul(w, w) == S.inf_lead, ErrorKind::BadInput, "w^2 != leading coefficient");
      D.add_place(PlaceCt::inf_split(w), m);
      continue;
    }
    PlaceC base = place_c_from_entry(S.base, e);
    uint32_t hv = h_value(S, base);
    require(hv != 0, ErrorKind::BadInput, base.to_string() + " is a branch point; use ramified");
    require(F.mul(w, w) == hv, ErrorKind::BadInput, "w^2 != h at " + base.to_string());
    D.add_place(PlaceCt::split(base, w), m);
  }
  return D;
}

std::string divisor_ct_to_json(const DivisorCt& D) {
  json j;
  j["places"] = json::array();
  for (auto& [pl, m] : D.mult) {
    json e;
    switch (pl.kind) {
      case CtKind::Split:
        e = place_c_entry(pl.base, m);
        e.erase("mult");
        e["w"] = pl.w;
        break;
      case CtKind::InfSplit:
        e["kind"] = "infinity";
        e["w"] = pl.w;
        break;
      case CtKind::Ramified:
        e["kind"] = "ramified";
        if (!pl.base.is_infinite()) {
          e["x"] = pl.base.a;
          if (pl.base.kind == PlaceKind::Finite) e["y"] = pl.base.b;
        }
        break;
    }
    e["mult"] = m;
    j["places"].push_back(e);
  }
  return j.dump();
}

// ------------------------------------------------------------------ classify

const char* verdict_name(WobblyVerdict v) {
  switch (v) {
    case WobblyVerdict::Wobbly: return "Wobbly";
    case WobblyVerdict::VeryStable: return "VeryStable";
    case WobblyVerdict::WobblyIfSemistable: return "WobblyIfSemistable";
    case WobblyVerdict::Unstable: return "Unstable";
  }
  return "?";
}

ClassificationReport classify(const HyperellipticCurve& C, const QuadDifferential& q,
                              const DivisorCt& Dt, int effort, uint64_t seed) {
  require(Dt.effective(), ErrorKind::BadInput, "classify expects an effective divisor");
  SpectralCtx ctx(C, q);
  const int g = C.g;
  ClassificationReport rep;
  rep.degree = Dt.degree();
  rep.reduced = Dt.reduced();

  DivisorC Nm = norm_divisor(ctx.S, Dt);
  auto ps = pullback_summand(ctx.S, Dt);
  rep.pullback_P = ps.P;
  auto qsys = qspecial_system(C, Nm);
  rep.qspecial = !qsys.empty();
  rep.qspecial_dim = static_cast<int>(qsys.size());

  HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
  rep.h0 = h0_ct(ctx, Dt);
  auto des = destabilizer_search(ctx, E, effort, seed);
  rep.destabilized = des.found.has_value();

  if (rep.destabilized)
    rep.verdict = WobblyVerdict::Unstable;
  else if (rep.qspecial)
    rep.verdict = WobblyVerdict::WobblyIfSemistable;
  else
    rep.verdict = WobblyVerdict::VeryStable;

  rep.lambda = ((E.degE % 2) + 2) % 2;
  rep.k_label = 4 * g - 4 - rep.degree;
  rep.k_in_range = (rep.lambda <= rep.k_label) && (rep.k_label <= 2 * g - 2 - rep.lambda);

  // best-effort square-root twist: L with 2L = K + det(E) - Nm(Dt)
  DivisorC detd = det_divisor(ctx, E);
  DivisorC Starget = DivisorC::single(PlaceC::infinity(), 2 * g - 2) + detd - Nm;
  json sqrt_twist;
  sqrt_twist["found"] = false;
  {
    Rng rng = Rng::derive(seed, 0x5157);
    std::vector<DivisorC> cands;
    cands.push_back(DivisorC{});
    for (int i = 0; i < 4 * std::max(1, effort); ++i) {
      PlaceCt a = sample_spectral_place(ctx.S, rng), b = sample_spectral_place(ctx.S, rng);
      DivisorC d;
      d.add_place(a.base, 1);
      d.add_place(b.base, -1);
      if (!d.is_zero()) cands.push_back(d);
    }
    for (auto& c : cands) {
      if (c.degree() * 2 != Starget.degree()) continue;
      if (iso_trivial(ctx, LineClass::of(c.scaled(2) - Starget))) {
        sqrt_twist["found"] = true;
        sqrt_twist["representative"] = json::parse(divisor_c_to_json(c));
        break;
      }
    }
    if (!sqrt_twist["found"].get<bool>()) sqrt_twist["note"] = "NotFound (bounded search)";
  }

  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["seed"] = seed;
  j["effort"] = effort;
  j["input"]["curve"] = json::parse(curve_to_json(C));
  j["input"]["q"] = json::parse(quaddiff_to_json(q));
  j["input"]["divisor"] = json::parse(divisor_ct_to_json(Dt));
  j["degree"] = rep.degree;
  j["norm_divisor"] = json::parse(divisor_c_to_json(Nm));
  j["pullback_summand"] = json::parse(divisor_c_to_json(ps.P));
  j["reduced"] = rep.reduced;
  j["qspecial"] = rep.qspecial;
  j["qspecial_dim"] = rep.qspecial_dim;
  j["h0"] = rep.h0;
  j["destabilizer"]["status"] = rep.destabilized ? "Destabilized" : "NoneFound";
  j["destabilizer"]["candidates_tried"] = des.candidates_tried;
  if (des.found) {
    j["destabilizer"]["witness_degree"] = des.found->L.degree();
    j["destabilizer"]["witness_rep"] = json::parse(divisor_c_to_json(des.found->L.rep));
    j["destabilizer"]["hom_dim"] = des.found->hom_dim;
    try {
      DivisorCt Dt1 = baker_akhiezer_divisor(ctx, E, des.found->L, des.found->witness);
      json t1;
      t1["Dt_degree"] = Dt1.degree();
      t1["reduced"] = Dt1.reduced();
      t1["limit_verdict"] = Dt1.reduced() ? "VeryStableLimit" : "WobblyLimit";
      j["theorem1"] = t1;
    } catch (const Error& e) {
      j["theorem1"] = std::string("unavailable: ") + e.what();
    }
  } else {
    j["destabilizer"]["note"] =
        "NoneFound is a bounded-search statement, not a semistability proof";
  }
  j["verdict"] = verdict_name(rep.verdict);
  j["lambda"] = rep.lambda;
  j["k_label"] = rep.k_label;
  j["k_in_range"] = rep.k_in_range;
  if (!rep.k_in_range) j["k_note"] = "outside [lambda, 2g-2-lambda]: instability expected";
  if (!ps.P.is_zero() && rep.verdict == WobblyVerdict::WobblyIfSemistable)
    j["refined_membership"] = {rep.k_label, rep.k_label + 2 * ps.P.degree()};
  if (rep.verdict == WobblyVerdict::WobblyIfSemistable)
    j["component"] = "W_" + std::to_string(rep.k_label) + (ps.P.is_zero() ? "^0" : "");
  j["sqrt_twist"] = sqrt_twist;
  rep.json = j.dump(2);
  return rep;
}

// ------------------------------------------------------------------ spectrum

std::vector<SpectrumEntry> component_spectrum(int g, int lambda) {
  require(g >= 2, ErrorKind::BadInput, "genus must be >= 2");
  require(lambda == 0 || lambda == 1, ErrorKind::BadInput, "lambda must be 0 or 1");
  int cutoff = (g % 2 == lambda % 2) ? g : g - 1;
  std::vector<SpectrumEntry> out;
  for (int k = lambda; k <= 2 * g - 2 - lambda; k += 2) {
    SpectrumEntry e;
    e.k = k;
    e.divisor = (k <= g);
    e.in_decomposition = (k <= cutoff);
    e.contained_in = (k > cutoff) ? cutoff : k;
    out.push_back(e);
  }
  return out;
}

std::string spectrum_to_json(int g, int lambda) {
  auto sp = component_spectrum(g, lambda);
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["genus"] = g;
  j["lambda"] = lambda;
  j["components"] = json::array();
  for (auto& e : sp) {
    json c;
    c["k"] = e.k;
    c["codimension"] = e.divisor ? "1 (divisor)" : "> 1";
    c["in_decomposition"] = e.in_decomposition;
    if (!e.in_decomposition) c["contained_in"] = "W_" + std::to_string(e.contained_in);
    j["components"].push_back(c);
  }
  return j.dump(2);
}

// ------------------------------------------------------------------ bn

BnNumbers bn_numbers(int g, int r, int d) {
  require(g >= 2, ErrorKind::BadInput, "genus must be >= 2");
  require(r >= 1, ErrorKind::BadInput, "r must be >= 1");
  BnNumbers b;
  b.g = g;
  b.r = r;
  b.d = d;
  b.g_tilde = 4 * g - 3;
  b.rho = b.g_tilde - r * (b.g_tilde - d + r - 1);
  if (r == 2) {
    b.has_r2 = true;
    b.rho2_closed_form = 2 * d - 4 * g + 1;
    require(b.rho == b.rho2_closed_form, ErrorKind::Internal, "rho(2, d) closed form mismatch");
    b.rho_2q = d - g - 3;
  }
  return b;
}

std::string bn_to_json(const BnNumbers& b) {
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["genus"] = b.g;
  j["g_tilde"] = b.g_tilde;
  j["r"] = b.r;
  j["d"] = b.d;
  j["rho"] = b.rho;
  if (b.has_r2) {
    j["rho_closed_form_r2"] = b.rho2_closed_form;
    j["rho_2Q"] = b.rho_2q;
    j["codim_W2sing"] = {{"lambda0", b.codim_w2sing_lambda0},
                         {"lambda1", b.codim_w2sing_lambda1}};
  }
  return j.dump(2);
}

// ------------------------------------------------------------------ survey

static std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

SurveyReport survey(const HyperellipticCurve& C, const QuadDifferential& q, int degree,
                    int trials, uint64_t seed, int effort) {
  require(degree >= 1, ErrorKind::BadInput, "degree must be >= 1");
  require(trials >= 1, ErrorKind::BadInput, "trials must be >= 1");
  SpectralCtx ctx(C, q);
  const int g = C.g;
  bool qstats = degree <= 4 * g - 4;

  struct Trial {
    bool qspecial = false;
    bool h0ge2 = false;
    bool destabilized = false;
  };
  std::vector<Trial> results(trials);
  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      Rng rng = Rng::derive(seed, static_cast<uint64_t>(i));
      DivisorCt Dt;
      for (int k = 0; k < degree; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      Trial t;
      if (qstats) t.qspecial = !qspecial_system(C, norm_divisor(ctx.S, Dt)).empty();
      t.h0ge2 = h0_ct(ctx, Dt) >= 2;
      HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
      t.destabilized = destabilizer_search(ctx, E, effort, rng.next()).found.has_value();
      results[i] = t;
    }
  };
  unsigned nthreads = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (trials < 16) nthreads = 1;
  std::vector<std::thread> pool;
  int chunk = (trials + static_cast<int>(nthreads) - 1) / static_cast<int>(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    int lo = static_cast<int>(t) * chunk, hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run_range, lo, hi);
  }
  for (auto& th : pool) th.join();

  SurveyReport rep;
  rep.trials = trials;
  for (const Trial& t : results) {
    if (t.qspecial) ++rep.qspecial_count;
    if (t.h0ge2) ++rep.h0ge2_count;
    if (t.destabilized) ++rep.destabilized_count;
    if (t.h0ge2 && t.qspecial && !t.destabilized) ++rep.singular_wobbly_hits;
  }
  auto freq = [&](int c) { return static_cast<double>(c) / trials; };
  auto radius = [&](int c) {
    double f = freq(c);
    return 1.96 * std::sqrt(f * (1.0 - f) / trials);
  };
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["seed"] = seed;
  j["effort"] = effort;
  j["input"]["curve"] = json::parse(curve_to_json(C));
  j["input"]["q"] = json::parse(quaddiff_to_json(q));
  j["degree"] = degree;
  j["trials"] = trials;
  j["counts"]["qspecial"] = qstats ? json(rep.qspecial_count) : json(nullptr);
  j["counts"]["h0_ge_2"] = rep.h0ge2_count;
  j["counts"]["destabilized"] = rep.destabilized_count;
  j["counts"]["singular_wobbly_hits"] = rep.singular_wobbly_hits;
  if (qstats) {
    j["frequencies"]["qspecial"] = fixed6(freq(rep.qspecial_count));
    j["frequencies"]["qspecial_ci95"] = fixed6(radius(rep.qspecial_count));
  }
  j["frequencies"]["h0_ge_2"] = fixed6(freq(rep.h0ge2_count));
  j["frequencies"]["h0_ge_2_ci95"] = fixed6(radius(rep.h0ge2_count));
  j["frequencies"]["destabilized"] = fixed6(freq(rep.destabilized_count));
  j["frequencies"]["destabilized_ci95"] = fixed6(radius(rep.destabilized_count));
  j["sampling"] = "uniform over rational places with replacement (inert fibers never enter)";
  rep.json = j.dump(2);
  return rep;
}

// ------------------------------------------------------------------ singular

SingularReport detect_singular(const HyperellipticCurve& C, const QuadDifferential& q,
                               const DivisorCt& Dt, int effort, uint64_t seed) {
  SpectralCtx ctx(C, q);
  const int g = C.g;
  SingularReport rep;
  rep.r = h0_ct(ctx, Dt);
  if (rep.r < 2)
    fail(ErrorKind::NotBrillNoether,
         "h^0 = " + std::to_string(rep.r) + " < 2: not a Brill-Noether point");
  HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
  auto secs = global_sections_ct(ctx, Dt);
  require(static_cast<int>(secs.size()) == rep.r, ErrorKind::Internal, "section count");

  Rng rng = Rng::derive(seed, 0xd5);
  int members_checked = 0, members_clean = 0;
  for (int t = 0; t < 5; ++t) {
    FnCt comb = secs[0];
    for (size_t s = 1; s < secs.size(); ++s)
      comb = fnct_add(ctx.S, comb,
                      fnct_scale(ctx.S, secs[s], static_cast<uint32_t>(rng.below(C.p))));
    try {
      DivisorCt member = baker_akhiezer_divisor(ctx, E, LineClass::trivial(), comb);
      ++members_checked;
      if (pullback_summand(ctx.S, member).P.is_zero()) ++members_clean;
    } catch (const Error&) {
    }
  }

  rep.dim_Vi = theorem2_dim_lattice(ctx, E);
  rep.dim_VL_lower = rep.dim_Vi + rep.r - 1;

  const FnCt& i1 = secs[0];
  const FnCt& i2 = secs[1];
  auto try_c = [&](uint32_t c) -> bool {
    FnCt i3 = fnct_add(ctx.S, i1, fnct_scale(ctx.S, i2, c));
    if (i3.is_zero()) return false;
    try {
      DivisorCt ba = baker_akhiezer_divisor(ctx, E, LineClass::trivial(), i3);
      DivisorC P = pullback_summand(ctx.S, ba).P;
      if (!P.is_zero()) {
        rep.found_P = true;
        rep.P = P;
        rep.combo_c = c;
        return true;
      }
    } catch (const Error&) {
    }
    return false;
  };
  // candidates from the degeneracy locus of i1 ^ i2, then a bounded scan
  std::vector<uint32_t> cands;
  {
    FunctionOnC nu12 = fn_add(C, fn_mul(C, i1.e0, i2.e1),
                              fn_scale(C, fn_mul(C, i1.e1, i2.e0), C.R.F.neg(1)));
    if (!nu12.is_zero()) {
      try {
        DivisorC Z = divisor_of_function(C, nu12);
        for (auto& [pl, m] : Z.mult) {
          if (m <= 0 || pl.is_infinite()) continue;
          for (const PlaceCt& Q : fiber_over(ctx.S, pl)) {
            Series s1 = expand_fnct(ctx.S, i1, Q, 2);
            Series s2 = expand_fnct(ctx.S, i2, Q, 2);
            if (s1.off < 0 || s2.off < 0) continue;
            uint32_t v1 = s1.coeff(0), v2 = s2.coeff(0);
            if (v2 != 0) cands.push_back(C.R.F.div(C.R.F.neg(v1), v2));
          }
        }
      } catch (const Error&) {
      }
    }
  }
  bool ok = false;
  for (uint32_t c : cands)
    if ((ok = try_c(c))) break;
  for (uint32_t c = 0; !ok && c < std::min<uint32_t>(C.p, 16u * std::max(1, effort)); ++c)
    ok = try_c(c);

  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["seed"] = seed;
  j["input"]["curve"] = json::parse(curve_to_json(C));
  j["input"]["q"] = json::parse(quaddiff_to_json(q));
  j["input"]["divisor"] = json::parse(divisor_ct_to_json(Dt));
  j["r"] = rep.r;
  j["degree"] = Dt.degree();
  j["members_sampled"] = members_checked;
  j["members_without_invariant_summand"] = members_clean;
  j["dim_V_i"] = rep.dim_Vi;
  j["dim_V_L_lower"] = rep.dim_VL_lower;
  int d = Dt.degree();
  int lam = ((d - (2 * g - 2)) % 2 + 2) % 2;
  if (3 * g - 4 + lam <= d && d <= 4 * g - 4 - lam) {
    j["bound"] = {{"case", "3g-4+lambda <= d <= 4g-4-lambda"},
                  {"required", rep.r},
                  {"satisfied", rep.dim_VL_lower >= rep.r}};
  } else if (d < 3 * g - 4) {
    j["bound"] = {{"case", "d < 3g-4"},
                  {"required", 3 * g - 4 - d + rep.r},
                  {"satisfied", rep.dim_VL_lower >= 3 * g - 4 - d + rep.r}};
  }
  if (d == 4 * g - 4 && rep.r * rep.r <= 3 * g - 3)
    j["theta_regime"] = {{"dimension_floor", 3 * g - 3 - rep.r * rep.r},
                         {"note", "higher-order Theta vanishing point"}};
  j["i3_found"] = rep.found_P;
  if (rep.found_P) {
    j["i3"]["c"] = rep.combo_c;
    j["i3"]["P"] = json::parse(divisor_c_to_json(rep.P));
    j["i3"]["membership"] = {4 * g - 4 - d, 4 * g - 4 - d + 2 * rep.P.degree()};
  }
  rep.json = j.dump(2);
  return rep;
}

// ------------------------------------------------------------------ check

HyperellipticCurve standard_curve(int g, uint32_t p) {
  PolyRing R(p);
  if (g == 2) return validate_curve(p, 2, R.from_ints({1, 0, 0, 0, 0, 1}));
  if (g == 3) return validate_curve(p, 3, R.from_ints({1, 1, 0, 0, 0, 0, 0, 1}));
  fail(ErrorKind::BadInput, "standard configurations exist for g = 2 and g = 3");
}

QuadDifferential standard_q(const HyperellipticCurve& C) {
  const PolyRing& R = C.R;
  if (C.g == 2) return make_quaddiff(C, R.from_ints({0, -17, 1}), Poly{});
  if (C.g == 3) {
    Poly A = R.mul(R.mul(R.from_ints({0, 1}), R.from_ints({-5, 1})),
                   R.mul(R.from_ints({-11, 1}), R.from_ints({-15, 1})));
    return make_quaddiff(C, A, Poly{});
  }
  fail(ErrorKind::BadInput, "standard configurations exist for g = 2 and g = 3");
}

CheckLedger verify_suite(const HyperellipticCurve& C, const QuadDifferential& q, int trials,
                         uint64_t seed) {
  CheckLedger ledger;
  const PolyRing& R = C.R;
  const Fp& F = R.F;
  const int g = C.g;
  int n = std::max(1, trials);

  auto run = [&](const std::string& name, int instances, auto body) {
    CheckEntry e;
    e.name = name;
    e.instances = instances;
    try {
      body();
      e.passed = true;
    } catch (const std::exception& ex) {
      e.passed = false;
      json r;
      r["curve"] = json::parse(curve_to_json(C));
      r["q"] = json::parse(quaddiff_to_json(q));
      r["seed"] = seed;
      r["error"] = ex.what();
      e.detail = r.dump();
    }
    ledger.entries.push_back(std::move(e));
  };

  run("field_axioms", 40 * n, [&] {
    Rng rng = Rng::derive(seed, 1);
    for (int i = 0; i < 40 * n; ++i) {
      uint32_t a = (uint32_t)rng.below(F.p), b = (uint32_t)rng.below(F.p),
               c = (uint32_t)rng.below(F.p);
      require(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)), ErrorKind::Internal,
              "distributivity");
      require(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c), ErrorKind::Internal,
              "associativity");
      if (a) require(F.mul(a, F.inv(a)) == 1, ErrorKind::Internal, "inverse");
    }
  });

  run("series_sqrt_order", 10 * n, [&] {
    SeriesRing Sr{F};
    Rng rng = Rng::derive(seed, 2);
    for (int i = 0; i < 10 * n; ++i) {
      Series s(0, 10);
      uint32_t l;
      do {
        l = 1 + (uint32_t)rng.below(F.p - 1);
      } while (F.legendre(l) != 1);
      s.set(0, l);
      for (int e2 = 1; e2 < 10; ++e2) s.set(e2, (uint32_t)rng.below(F.p));
      Series r2 = Sr.sqrt(s);
      Series diff = Sr.sub(Sr.mul(r2, r2), s);
      require(diff.val_or_prec() >= diff.prec, ErrorKind::Internal, "sqrt order loss");
    }
  });

  run("kernel_basis_exactness", 10 * n, [&] {
    Rng rng = Rng::derive(seed, 3);
    for (int i = 0; i < 10 * n; ++i) {
      FpMat M(4, 7);
      for (auto& v : M.a) v = (uint32_t)rng.below(F.p);
      auto ker = kernel_basis(F, M);  // internal checks: Mv = 0, rank-nullity
      require((int)ker.size() == 7 - rank(F, M), ErrorKind::Internal, "nullity");
    }
  });

  run("weak_popov_cofactors_spans", 3 * n, [&] {
    Rng rng = Rng::derive(seed, 4);
    for (int i = 0; i < 3 * n; ++i) {
      PolyMat G(3, 5);
      for (auto& e2 : G.e) e2 = R.random(rng, (int)rng.below(3));
      try {
        auto res = weak_popov_reduce(R, G, 3);
        PolyMat prod = pm_mul(R, G, res.trans);
        for (int a = 0; a < prod.rows; ++a)
          for (int b = 0; b < prod.cols; ++b)
            require(prod.at(a, b) == res.basis.at(a, b), ErrorKind::Internal, "cofactor");
        for (int k = 0; k < 50; ++k) {
          uint32_t x0 = (uint32_t)rng.below(F.p);
          FpMat ga = pm_eval(F, R, G, x0), gb = pm_eval(F, R, res.basis, x0);
          FpMat joint(3, ga.cols + gb.cols);
          for (int r3 = 0; r3 < 3; ++r3) {
            for (int c2 = 0; c2 < ga.cols; ++c2) joint.at(r3, c2) = ga.at(r3, c2);
            for (int c2 = 0; c2 < gb.cols; ++c2) joint.at(r3, ga.cols + c2) = gb.at(r3, c2);
          }
          require(rank(F, ga) == rank(F, joint), ErrorKind::Internal, "span eval");
        }
      } catch (const Error& e2) {
        if (e2.kind() != ErrorKind::RankDeficient) throw;
      }
    }
  });

  run("quaddiff_divisor_degree", 5 * n, [&] {
    Rng rng = Rng::derive(seed, 5);
    int done = 0, guard = 0;
    while (done < 5 * n && ++guard < 200 * n) {
      Poly A = R.random(rng, (int)rng.below(2 * g - 1));
      if (A.is_zero()) continue;
      try {
        DivisorC d = divisor_of_quaddiff(C, make_quaddiff(C, A, Poly{}));
        require(d.degree() == 4 * g - 4 && d.effective(), ErrorKind::Internal, "deg div(q)");
      } catch (const Error& e2) {
        if (e2.kind() != ErrorKind::IrrationalSupport) throw;
      }
      ++done;
    }
  });

  run("qspecial_dimension_bounds", 5 * n, [&] {
    Rng rng = Rng::derive(seed, 6);
    for (int i = 0; i < 5 * n; ++i) {
      int d = 1 + (int)rng.below(4 * g - 4);
      DivisorC D;
      for (int k = 0; k < d; ++k) D.add_place(sample_place(C, rng), 1);
      auto sys = qspecial_system(C, D);
      require((int)sys.size() >= std::max(0, 3 * g - 3 - D.degree()), ErrorKind::Internal,
              "qspecial dim lower bound");
    }
  });

  run("riemann_roch_serre_on_C", 5 * n, [&] {
    Rng rng = Rng::derive(seed, 7);
    DivisorC K = DivisorC::single(PlaceC::infinity(), 2 * g - 2);
    for (int i = 0; i < 5 * n; ++i) {
      DivisorC D;
      int np = (int)rng.below(2 * g + 2);
      for (int k = 0; k < np; ++k) D.add_place(sample_place(C, rng), 1);
      int l = rr_dim_on_C(C, D);
      int ld = rr_dim_on_C(C, K - D);
      require(l - ld == D.degree() - g + 1, ErrorKind::Internal, "Serre duality");
    }
  });

  SpectralCtx ctx(C, q);

  run("lattice_vs_direct_h0_on_C", 3 * n, [&] {
    Rng rng = Rng::derive(seed, 8);
    for (int i = 0; i < 3 * n; ++i) {
      DivisorC D;
      int np = (int)rng.below(2 * g + 2);
      for (int k = 0; k < np; ++k) D.add_place(sample_place(C, rng), 1);
      require(h0_c(ctx, D) == rr_dim_on_C(C, D), ErrorKind::Internal,
              "lattice h0 != direct RR dim");
    }
  });

  run("norm_pullback_involution", 10 * n, [&] {
    Rng rng = Rng::derive(seed, 9);
    for (int i = 0; i < 10 * n; ++i) {
      DivisorCt Dt;
      int d = 1 + (int)rng.below(5);
      for (int k = 0; k < d; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      require(norm_divisor(ctx.S, involution_divisor(ctx.S, Dt)) == norm_divisor(ctx.S, Dt),
              ErrorKind::Internal, "Nm o sigma");
      require(involution_divisor(ctx.S, involution_divisor(ctx.S, Dt)) == Dt,
              ErrorKind::Internal, "sigma^2");
      require(Dt + involution_divisor(ctx.S, Dt) ==
                  pullback_divisor(ctx.S, norm_divisor(ctx.S, Dt)),
              ErrorKind::Internal, "fiber identity");
    }
  });

  run("riemann_roch_serre_on_Ct", 2 * n, [&] {
    Rng rng = Rng::derive(seed, 10);
    DivisorCt K = canonical_divisor_ct(ctx.S);
    for (int i = 0; i < 2 * n; ++i) {
      DivisorCt Dt;
      int d = (int)rng.below(6);
      for (int k = 0; k < d; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      int h0 = h0_ct(ctx, Dt);
      int h1 = h0_ct(ctx, K - Dt);
      require(h0 - h1 == Dt.degree() - ctx.S.genus() + 1, ErrorKind::Internal,
              "Riemann-Roch on Ct");
    }
  });

  run("determinant_identity", 2 * n, [&] {
    Rng rng = Rng::derive(seed, 11);
    for (int i = 0; i < 2 * n; ++i) {
      DivisorCt Dt;
      int d = (int)rng.below(5);
      for (int k = 0; k < d; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
      DivisorC dd = det_divisor(ctx, E);
      LineClass target = LineClass::of(dd) + LineClass::canonical(C) -
                         LineClass::of(norm_divisor(ctx.S, Dt));
      require(iso_trivial(ctx, target), ErrorKind::Internal, "det pi_* != Nm - K");
    }
  });

  run("theorem2_dimension_two_routes", 2 * n, [&] {
    Rng rng = Rng::derive(seed, 12);
    int done = 0, guard = 0;
    while (done < 2 * n && ++guard < 40 * n) {
      DivisorCt Dt;
      int d = 1 + (int)rng.below(3 * g);
      while (Dt.degree() < d) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      if (!pullback_summand(ctx.S, Dt).P.is_zero()) continue;
      HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
      int r1 = (int)qspecial_system(C, norm_divisor(ctx.S, Dt)).size();
      require(r1 == theorem2_dim_lattice(ctx, E), ErrorKind::Internal,
              "Theorem-2 dimension routes disagree");
      ++done;
    }
  });

  run("norm_identity_prop1", 2 * n, [&] {
    Rng rng = Rng::derive(seed, 13);
    int done = 0, guard = 0;
    while (done < 2 * n && ++guard < 40 * n) {
      DivisorCt Dt;
      int d = 2 + (int)rng.below(2 * g + 2);
      while (Dt.degree() < d) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      if (!pullback_summand(ctx.S, Dt).P.is_zero()) continue;
      HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
      CSection cs = c_section(ctx, E);
      DivisorCt ba = baker_akhiezer_divisor(ctx, E);
      require(norm_divisor(ctx.S, ba) == cs.divisor, ErrorKind::Internal,
              "Nm(BA divisor) != c-section divisor");
      ++done;
    }
  });

  run("nilpotent_round_trip", n, [&] {
    Rng rng = Rng::derive(seed, 14);
    int done = 0, guard = 0;
    while (done < n && ++guard < 40 * n) {
      DivisorCt Dt;
      int d = 1 + (int)rng.below(2 * g);
      while (Dt.degree() < d) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
      if (!pullback_summand(ctx.S, Dt).P.is_zero()) continue;
      auto [ok, qb] = is_qspecial_spectral(ctx.S, Dt);
      if (!ok) continue;
      HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
      NilpotentField phi = nilpotent_from_quad(ctx, E, qb.front());
      QuadDifferential q2 = quad_from_nilpotent(ctx, E, phi);
      uint32_t c = 0;
      bool prop = false;
      if (!q2.A.is_zero() && !qb.front().A.is_zero()) {
        c = F.div(q2.A.lead(), qb.front().A.lead());
        prop = R.scale(qb.front().A, c) == q2.A && R.scale(qb.front().B, c) == q2.B;
      } else if (!q2.B.is_zero() && !qb.front().B.is_zero()) {
        c = F.div(q2.B.lead(), qb.front().B.lead());
        prop = R.scale(qb.front().A, c) == q2.A && R.scale(qb.front().B, c) == q2.B;
      }
      require(prop, ErrorKind::Internal, "q -> phi_n -> q' not proportional");
      ++done;
    }
  });

  run("splitting_type_pushforwards", 2, [&] {
    LatticePair Pb = lattice_of_c(ctx.Ob, DivisorC{});
    auto st = splitting_type(ctx.Ob, Pb);
    require(st.a == std::vector<int>({0, -(g + 1)}), ErrorKind::Internal,
            "rho_* O_C splitting type");
    LatticePair Pt = lattice_of_ct(ctx.Ot, DivisorCt{});
    auto st2 = splitting_type(ctx.Ot, Pt);
    require((int)st2.a.size() == 4 && st2.a[0] == 0, ErrorKind::Internal,
            "pushforward of O_Ct splitting shape");
    if (g == 2)
      require(st2.a == std::vector<int>({0, -1, -3, -4}), ErrorKind::Internal,
              "(rho o pi)_* O_Ct at g = 2");
  });

  run("higgs_structure", 1, [&] {
    Rng rng = Rng::derive(seed, 15);
    DivisorCt Dt;
    for (int k = 0; k < 3; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
    HiggsBundleData E = direct_image(ctx, LineClass::trivial(), Dt);
    PolyMat W2 = pm_mul(R, E.W0, E.W0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Poly expect = R.mul(q.B, E.Y0.at(i, j));
        if (i == j) expect = R.add(expect, q.A);
        require(W2.at(i, j) == expect, ErrorKind::Internal, "W^2 != h");
      }
    PolyMat YW = pm_mul(R, E.Y0, E.W0);
    PolyMat WY = pm_mul(R, E.W0, E.Y0);
    for (size_t i = 0; i < YW.e.size(); ++i)
      require(YW.e[i] == WY.e[i], ErrorKind::Internal, "YW != WY");
  });

  run("classify_determinism", 1, [&] {
    Rng rng = Rng::derive(seed, 16);
    DivisorCt Dt;
    for (int k = 0; k < 2 * g - 2; ++k) Dt.add_place(sample_spectral_place(ctx.S, rng), 1);
    auto r1 = classify(C, q, Dt, 2, seed);
    auto r2 = classify(C, q, Dt, 2, seed);
    require(r1.json == r2.json, ErrorKind::Internal, "classify not byte-identical");
  });

  run("bn_identities", 1, [&] {
    for (int d = 0; d <= 4 * g - 3; ++d) {
      BnNumbers b = bn_numbers(g, 2, d);
      require(b.rho == 2 * d - 4 * g + 1, ErrorKind::Internal, "rho r=2 closed form");
      require(b.rho_2q == d - g - 3, ErrorKind::Internal, "rho_2Q");
      int prev = bn_numbers(g, 1, d).rho;
      for (int r3 = 2; r3 <= 4; ++r3) {
        int cur = bn_numbers(g, r3, d).rho;
        require(cur <= prev, ErrorKind::Internal, "rho not nonincreasing in r");
        prev = cur;
      }
    }
  });

  run("component_spectrum_parity", 1, [&] {
    for (int gg = 2; gg <= 6; ++gg)
      for (int lam = 0; lam <= 1; ++lam) {
        auto sp = component_spectrum(gg, lam);
        for (auto& e2 : sp) {
          require(e2.k % 2 == lam % 2, ErrorKind::Internal, "parity");
          require(lam <= e2.k && e2.k <= 2 * gg - 2 - lam, ErrorKind::Internal, "bound");
          require(e2.divisor == (e2.k <= gg), ErrorKind::Internal, "divisor flag");
        }
      }
  });

  return ledger;
}

std::string CheckLedger::to_json() const {
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = kToolVersion;
  j["passed"] = all_passed();
  j["checks"] = json::array();
  for (auto& e : entries) {
    json c;
    c["name"] = e.name;
    c["instances"] = e.instances;
    c["passed"] = e.passed;
    if (!e.detail.empty()) c["reproducer"] = e.detail;
    j["checks"].push_back(c);
  }
  return j.dump(2);
}

std::string CheckLedger::to_text() const {
  std::string s;
  for (auto& e : entries) {
    s += (e.passed ? "PASS " : "FAIL ") + e.name + " (" + std::to_string(e.instances) +
         " instances)";
    if (!e.passed) s += "  " + e.detail;
    s += "\n";
  }
  s += all_passed() ? "ALL CHECKS PASSED\n" : "CHECKS FAILED\n";
  return s;
}

}  // namespace wobbly::lab
