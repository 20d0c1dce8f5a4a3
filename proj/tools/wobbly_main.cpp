#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wobbly/lab.hpp"

using namespace wobbly;
using namespace wobbly::lab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadInput, "cannot open " + path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream o(out);
    if (!o) fail(ErrorKind::BadInput, "cannot write " + out);
    o << text << "\n";
  }
}

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::Internal ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wobbly: exact classification of wobbly bundles via spectral divisors"};
  app.require_subcommand(1);

  std::string curve_file, q_file, div_file, out_file;
  int effort = 8;
  uint64_t seed = 1;
  int degree = 1, trials = 100, genus = 2, lambda = 0, rr = 1;
  uint32_t prime = 131;

  auto* classify_cmd = app.add_subcommand("classify", "classify pi_* O(Dt) on a spectral curve");
  classify_cmd->add_option("--curve", curve_file, "curve JSON file")->required();
  classify_cmd->add_option("--q", q_file, "quadratic differential JSON file")->required();
  classify_cmd->add_option("--divisor", div_file, "spectral divisor JSON file")->required();
  classify_cmd->add_option("--effort", effort, "search effort");
  classify_cmd->add_option("--seed", seed, "random seed");
  classify_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* survey_cmd = app.add_subcommand("survey", "sampling survey at fixed divisor degree");
  survey_cmd->add_option("--curve", curve_file)->required();
  survey_cmd->add_option("--q", q_file)->required();
  survey_cmd->add_option("--degree", degree, "divisor degree")->required();
  survey_cmd->add_option("--trials", trials, "number of trials")->required();
  survey_cmd->add_option("--seed", seed, "random seed")->required();
  survey_cmd->add_option("--effort", effort, "destabilizer search effort");
  survey_cmd->add_option("--out", out_file);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "admissible wobbly components W_k");
  spectrum_cmd->add_option("--genus", genus)->required();
  spectrum_cmd->add_option("--lambda", lambda)->required();
  spectrum_cmd->add_option("--out", out_file);

  auto* bn_cmd = app.add_subcommand("bn", "Brill-Noether numbers for the spectral curve");
  bn_cmd->add_option("--genus", genus)->required();
  bn_cmd->add_option("--r", rr)->required();
  bn_cmd->add_option("--degree", degree)->required();
  bn_cmd->add_option("--out", out_file);

  auto* check_cmd = app.add_subcommand("check", "run the full invariant ledger");
  check_cmd->add_option("--curve", curve_file, "curve JSON file (default: standard config)");
  check_cmd->add_option("--q", q_file, "quadratic differential JSON file");
  check_cmd->add_option("--genus", genus, "standard configuration genus (2 or 3)");
  check_cmd->add_option("--p", prime, "standard configuration prime");
  check_cmd->add_option("--trials", trials, "instance multiplier")->required();
  check_cmd->add_option("--seed", seed, "random seed")->required();
  check_cmd->add_option("--out", out_file, "write the JSON ledger here");

  auto* sing_cmd = app.add_subcommand("singular", "Brill-Noether singularity probe");
  sing_cmd->add_option("--curve", curve_file)->required();
  sing_cmd->add_option("--q", q_file)->required();
  sing_cmd->add_option("--divisor", div_file)->required();
  sing_cmd->add_option("--effort", effort);
  sing_cmd->add_option("--seed", seed);
  sing_cmd->add_option("--out", out_file);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) {
      HyperellipticCurve C = curve_from_json(slurp(curve_file));
      QuadDifferential q = quaddiff_from_json(C, slurp(q_file));
      SpectralCurve S = build_spectral(C, q);
      DivisorCt Dt = divisor_ct_from_json(S, slurp(div_file));
      emit(classify(C, q, Dt, effort, seed).json, out_file);
    } else if (survey_cmd->parsed()) {
      HyperellipticCurve C = curve_from_json(slurp(curve_file));
      QuadDifferential q = quaddiff_from_json(C, slurp(q_file));
      emit(survey(C, q, degree, trials, seed, effort).json, out_file);
    } else if (spectrum_cmd->parsed()) {
      emit(spectrum_to_json(genus, lambda), out_file);
    } else if (bn_cmd->parsed()) {
      emit(bn_to_json(bn_numbers(genus, rr, degree)), out_file);
    } else if (check_cmd->parsed()) {
      HyperellipticCurve C =
          curve_file.empty() ? standard_curve(genus, prime) : curve_from_json(slurp(curve_file));
      QuadDifferential q =
          q_file.empty() ? standard_q(C) : quaddiff_from_json(C, slurp(q_file));
      CheckLedger ledger = verify_suite(C, q, trials, seed);
      std::cout << ledger.to_text();
      if (!out_file.empty()) emit(ledger.to_json(), out_file);
      return ledger.all_passed() ? 0 : 3;
    } else if (sing_cmd->parsed()) {
      HyperellipticCurve C = curve_from_json(slurp(curve_file));
      QuadDifferential q = quaddiff_from_json(C, slurp(q_file));
      SpectralCurve S = build_spectral(C, q);
      DivisorCt Dt = divisor_ct_from_json(S, slurp(div_file));
      emit(detect_singular(C, q, Dt, effort, seed).json, out_file);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
