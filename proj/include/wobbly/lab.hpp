#pragma once

#include <string>

#include "wobbly/bundle.hpp"

namespace wobbly::lab {

using namespace wobbly::bundle;

inline constexpr const char* kToolVersion = "wobbly/1.0.0";
inline constexpr const char* kReportSchema = "wobbly-report/1";

// ------------------------------------------------------------------ file IO

HyperellipticCurve curve_from_json(const std::string& text);
std::string curve_to_json(const HyperellipticCurve& C);
QuadDifferential quaddiff_from_json(const HyperellipticCurve& C, const std::string& text);
std::string quaddiff_to_json(const QuadDifferential& q);
DivisorC divisor_c_from_json(const HyperellipticCurve& C, const std::string& text);
std::string divisor_c_to_json(const DivisorC& D);
DivisorCt divisor_ct_from_json(const SpectralCurve& S, const std::string& text);
std::string divisor_ct_to_json(const DivisorCt& D);

// ------------------------------------------------------------------ classify

enum class WobblyVerdict { Wobbly, VeryStable, WobblyIfSemistable, Unstable };
const char* verdict_name(WobblyVerdict v);

struct ClassificationReport {
  std::string json;  // full structured report (schema wobbly-report/1)
  WobblyVerdict verdict;
  bool qspecial = false;
  int qspecial_dim = 0;
  int h0 = 0;
  bool reduced = false;
  int degree = 0;
  int k_label = 0;
  int lambda = 0;
  bool k_in_range = false;
  DivisorC pullback_P;
  bool destabilized = false;
};

ClassificationReport classify(const HyperellipticCurve& C, const QuadDifferential& q,
                              const DivisorCt& Dt, int effort, uint64_t seed);

// ------------------------------------------------------------------ spectrum

struct SpectrumEntry {
  int k;
  bool divisor;          // k <= g: pure codimension 1
  bool in_decomposition;  // appears in the union ending at W_g or W_{g-1}
  int contained_in;       // for k above the cutoff: the containing component
};
std::vector<SpectrumEntry> component_spectrum(int g, int lambda);
std::string spectrum_to_json(int g, int lambda);

// ------------------------------------------------------------------ bn

struct BnNumbers {
  int g, r, d;
  int g_tilde;
  int rho;
  bool has_r2 = false;
  int rho2_closed_form = 0;  // 2d - 4g + 1, checked against rho when r = 2
  int rho_2q = 0;            // d - g - 3
  int codim_w2sing_lambda0 = 4;
  int codim_w2sing_lambda1 = 5;
};
BnNumbers bn_numbers(int g, int r, int d);
std::string bn_to_json(const BnNumbers& b);

// ------------------------------------------------------------------ survey

struct SurveyReport {
  std::string json;
  int trials = 0;
  int qspecial_count = 0;
  int h0ge2_count = 0;
  int destabilized_count = 0;
  int singular_wobbly_hits = 0;  // h0 >= 2, Q-special, no destabilizer found
};
SurveyReport survey(const HyperellipticCurve& C, const QuadDifferential& q, int degree,
                    int trials, uint64_t seed, int effort);

// ------------------------------------------------------------------ singular

struct SingularReport {
  std::string json;
  int r = 0;           // h^0(O(Dt))
  int dim_Vi = 0;      // dim of nilpotent fields for one embedding
  int dim_VL_lower = 0;
  bool found_P = false;
  DivisorC P;
  uint32_t combo_c = 0;  // i3 = i1 + c i2
};
SingularReport detect_singular(const HyperellipticCurve& C, const QuadDifferential& q,
                               const DivisorCt& Dt, int effort, uint64_t seed);

// ------------------------------------------------------------------ check

struct CheckEntry {
  std::string name;
  int instances = 0;
  bool passed = false;
  std::string detail;  // failure reproducer when not passed
};
struct CheckLedger {
  std::vector<CheckEntry> entries;
  bool all_passed() const {
    for (auto& e : entries)
      if (!e.passed) return false;
    return true;
  }
  std::string to_json() const;
  std::string to_text() const;
};
CheckLedger verify_suite(const HyperellipticCurve& C, const QuadDifferential& q, int trials,
                         uint64_t seed);

// standard desk-scale configurations used by `wobbly check` and the tests
HyperellipticCurve standard_curve(int g, uint32_t p);
QuadDifferential standard_q(const HyperellipticCurve& C);

}  // namespace wobbly::lab
