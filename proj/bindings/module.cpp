#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wobbly/lab.hpp"

namespace py = pybind11;
using namespace wobbly;
using namespace wobbly::lab;

namespace {

// user-facing argument problems map to ValueError; internal invariant
// failures stay RuntimeError
[[noreturn]] void translate(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Internal:
      throw std::runtime_error(e.what());
    default:
      throw std::invalid_argument(e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    translate(e);
  }
}

std::string classify_json(const std::string& curve, const std::string& q,
                          const std::string& divisor, int effort, uint64_t seed) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    SpectralCurve S = build_spectral(C, qd);
    DivisorCt Dt = divisor_ct_from_json(S, divisor);
    return classify(C, qd, Dt, effort, seed).json;
  });
}

std::string survey_json(const std::string& curve, const std::string& q, int degree, int trials,
                        uint64_t seed, int effort) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    return survey(C, qd, degree, trials, seed, effort).json;
  });
}

std::string singular_json(const std::string& curve, const std::string& q,
                          const std::string& divisor, int effort, uint64_t seed) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    SpectralCurve S = build_spectral(C, qd);
    DivisorCt Dt = divisor_ct_from_json(S, divisor);
    return detect_singular(C, qd, Dt, effort, seed).json;
  });
}

py::tuple check_json(int genus, uint32_t p, int trials, uint64_t seed) {
  return guarded([&] {
    HyperellipticCurve C = standard_curve(genus, p);
    QuadDifferential qd = standard_q(C);
    CheckLedger led = verify_suite(C, qd, trials, seed);
    return py::make_tuple(led.all_passed(), led.to_json());
  });
}

py::tuple standard_config(int genus, uint32_t p) {
  return guarded([&] {
    HyperellipticCurve C = standard_curve(genus, p);
    return py::make_tuple(curve_to_json(C), quaddiff_to_json(standard_q(C)));
  });
}

int qspecial_dim(const std::string& curve, const std::string& divisor) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    DivisorC D = divisor_c_from_json(C, divisor);
    return static_cast<int>(qspecial_system(C, D).size());
  });
}

int rr_dim(const std::string& curve, const std::string& divisor) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    DivisorC D = divisor_c_from_json(C, divisor);
    return rr_dim_on_C(C, D);
  });
}

std::string quaddiff_divisor(const std::string& curve, const std::string& q) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    return divisor_c_to_json(divisor_of_quaddiff(C, qd));
  });
}

int h0_spectral(const std::string& curve, const std::string& q, const std::string& divisor) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    bundle::SpectralCtx ctx(C, qd);
    DivisorCt Dt = divisor_ct_from_json(ctx.S, divisor);
    return h0_ct(ctx, Dt);
  });
}

py::tuple place_counts(const std::string& curve, const std::string& q) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    SpectralCurve S = build_spectral(C, qd);
    return py::make_tuple(rational_places(C).size(), rational_places_ct(S).size());
  });
}

std::string sample_divisor(const std::string& curve, const std::string& q, int degree,
                           uint64_t seed) {
  return guarded([&] {
    HyperellipticCurve C = curve_from_json(curve);
    QuadDifferential qd = quaddiff_from_json(C, q);
    SpectralCurve S = build_spectral(C, qd);
    alg::Rng rng(seed);
    DivisorCt Dt;
    for (int i = 0; i < degree; ++i) Dt.add_place(sample_spectral_place(S, rng), 1);
    return divisor_ct_to_json(Dt);
  });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact wobbly-bundle classification on spectral curves over F_p";
  m.attr("__version__") = kToolVersion;

  m.def("classify", &classify_json, py::arg("curve"), py::arg("q"), py::arg("divisor"),
        py::arg("effort") = 8, py::arg("seed") = 1,
        "Classify pi_* O(Dt); returns the JSON report.");
  m.def("survey", &survey_json, py::arg("curve"), py::arg("q"), py::arg("degree"),
        py::arg("trials"), py::arg("seed") = 1, py::arg("effort") = 4,
        "Sampling survey at a fixed divisor degree; returns the JSON report.");
  m.def("singular", &singular_json, py::arg("curve"), py::arg("q"), py::arg("divisor"),
        py::arg("effort") = 8, py::arg("seed") = 1,
        "Brill-Noether singularity probe; returns the JSON report.");
  m.def("spectrum", &spectrum_to_json, py::arg("genus"), py::arg("lambda_"),
        "Admissible wobbly components W_k with annotations (JSON).");
  m.def("bn", [](int g, int r, int d) { return guarded([&] { return bn_to_json(bn_numbers(g, r, d)); }); },
        py::arg("genus"), py::arg("r"), py::arg("degree"),
        "Brill-Noether numbers for the spectral curve (JSON).");
  m.def("check", &check_json, py::arg("genus") = 2, py::arg("p") = 131, py::arg("trials") = 1,
        py::arg("seed") = 1, "Run the invariant ledger; returns (passed, json).");
  m.def("standard_config", &standard_config, py::arg("genus"), py::arg("p") = 131,
        "Standard desk-scale configuration as (curve_json, q_json).");
  m.def("qspecial_dim", &qspecial_dim, py::arg("curve"), py::arg("divisor"),
        "Dimension of {q in H^0(K^2) : div(q) >= D}.");
  m.def("rr_dim", &rr_dim, py::arg("curve"), py::arg("divisor"),
        "dim L(D) on the base curve.");
  m.def("quaddiff_divisor", &quaddiff_divisor, py::arg("curve"), py::arg("q"),
        "Divisor of a quadratic differential (JSON).");
  m.def("h0_spectral", &h0_spectral, py::arg("curve"), py::arg("q"), py::arg("divisor"),
        "h^0(Ct, O(Dt)) through the lattice engine.");
  m.def("place_counts", &place_counts, py::arg("curve"), py::arg("q"),
        "(#C(F_p), #Ct(F_p)) rational place counts.");
  m.def("sample_divisor", &sample_divisor, py::arg("curve"), py::arg("q"), py::arg("degree"),
        py::arg("seed") = 1, "Deterministically sample an effective spectral divisor (JSON).");
}
