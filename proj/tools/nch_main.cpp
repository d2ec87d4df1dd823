// Command-line front end: evaluate representations, transform matrices,
// extract moments, run realization round trips and non-uniqueness demos.
// All I/O is JSON; seeded randomness is the only nondeterminism source.
//
// Exit codes: 0 pass, 2 validation error, 3 domain error, 4 inconsistency,
// 5 internal error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nch/batch.hpp"
#include "nch/classical.hpp"
#include "nch/freefunc.hpp"
#include "nch/io.hpp"
#include "nch/lurking.hpp"
#include "nch/matrixcore.hpp"
#include "nch/moments.hpp"
#include "nch/nonuniq.hpp"
#include "nch/sampling.hpp"
#include "nch/types.hpp"

namespace {

using nch::CMat;
using nch::Complex;
using nch::Tolerance;
using nch::io::Json;

struct GlobalOpts {
  Tolerance tol;
  std::uint64_t seed = nch::sampling::kDefaultSeed;
  std::string json_out;
};

void emit(const GlobalOpts& g, const Json& payload) {
  std::cout << payload.dump(2) << '\n';
  if (!g.json_out.empty()) nch::io::save_json_file(g.json_out, payload);
}

Json run_report_header(const std::string& command,
                       const std::vector<std::string>& input_files,
                       std::uint64_t seed) {
  Json inputs = Json::object();
  for (const auto& f : input_files) inputs[f] = nch::io::file_digest(f);
  return Json{{"command", command}, {"inputs", std::move(inputs)},
              {"seed", seed}};
}

int cmd_eval(const GlobalOpts& g, const std::string& rep_file,
             const std::string& point_file) {
  auto rep = nch::io::rep_from_json(nch::io::load_json_file(rep_file));
  nch::freefunc::validate(rep, g.tol);
  auto x = nch::io::point_from_json(nch::io::load_json_file(point_file));
  const CMat h = nch::freefunc::eval_herglotz(rep, x, g.tol);
  emit(g, nch::io::matrix_to_json(h));
  return 0;
}

int cmd_cayley(const GlobalOpts& g, const std::string& matrix_file,
               const std::string& direction) {
  const CMat m = nch::io::matrix_from_json(nch::io::load_json_file(matrix_file));
  CMat out;
  if (direction == "to-schur")
    out = nch::freefunc::cayley_to_schur(m, g.tol);
  else if (direction == "to-herglotz")
    out = nch::freefunc::cayley_to_herglotz(m, g.tol);
  else
    throw nch::StructuralError("cayley: direction must be to-schur or to-herglotz");
  emit(g, nch::io::matrix_to_json(out));
  return 0;
}

std::vector<CMat> load_letters(const std::string& letters_file) {
  const Json j = nch::io::load_json_file(letters_file);
  if (!j.is_array())
    throw nch::StructuralError("letters file must be a JSON array of matrices");
  std::vector<CMat> letters;
  for (const auto& mj : j) letters.push_back(nch::io::matrix_from_json(mj));
  return letters;
}

int cmd_moments(const GlobalOpts& g, const std::string& rep_file,
                const std::string& letters_file, int random_letters,
                int max_len, bool check) {
  auto rep = nch::io::rep_from_json(nch::io::load_json_file(rep_file));
  nch::freefunc::validate(rep, g.tol);

  std::vector<CMat> letters;
  if (!letters_file.empty()) {
    letters = load_letters(letters_file);
  } else {
    nch::sampling::Rng rng(g.seed);
    for (int i = 0; i < random_letters; ++i)
      letters.push_back(nch::sampling::random_ball_point(
                            rng, rep.alpha.algebra, 1, 0.3, 0.9)
                            .matrix);
  }
  if (letters.empty())
    throw nch::StructuralError("moments: no letters (use --letters or --random-letters)");

  auto table = nch::moments::table_from_rep(rep, letters, max_len);
  Json payload = nch::io::table_to_json(table);

  // Cross-check the nilpotent extraction against the direct products.
  if (check) {
    auto evaluator = nch::freefunc::make_evaluator(rep, g.tol);
    auto extracted = nch::moments::extract_moments(evaluator, letters,
                                                   rep.alpha.algebra, 0.0, g.tol);
    double max_residual = 0.0;
    for (const auto& [range, value] : extracted.values) {
      nch::moments::Word w;
      for (int i = range.first; i <= range.second; ++i) {
        w.push_back(nch::moments::Letter::u());
        w.push_back(nch::moments::Letter::alg(i - 1));
      }
      const CMat direct = nch::moments::direct_moment(rep, letters, w);
      max_residual =
          std::max(max_residual, nch::matrixcore::opnorm(value - direct));
    }
    payload["extraction_check"] = Json{{"max_residual", max_residual},
                                       {"ok", max_residual <= 1e-9}};
  }
  emit(g, payload);
  return 0;
}

int cmd_gram(const GlobalOpts& g, const std::string& table_file,
             const std::string& rep_file, const std::string& letters_file,
             int max_len, const std::string& words_file) {
  nch::moments::MomentTable table;
  if (!table_file.empty()) {
    table = nch::io::table_from_json(nch::io::load_json_file(table_file));
  } else if (!rep_file.empty()) {
    auto rep = nch::io::rep_from_json(nch::io::load_json_file(rep_file));
    nch::freefunc::validate(rep, g.tol);
    if (letters_file.empty())
      throw nch::StructuralError("gram: --letters required with --rep");
    table = nch::moments::table_from_rep(rep, load_letters(letters_file),
                                         max_len);
  } else {
    throw nch::StructuralError("gram: need --table or --rep");
  }
  nch::moments::validate_table(table, g.tol);

  std::vector<nch::moments::Word> words;
  if (!words_file.empty()) {
    const Json j = nch::io::load_json_file(words_file);
    if (!j.is_array())
      throw nch::StructuralError("words file must be an array of tag arrays");
    for (const auto& wj : j) {
      nch::moments::Word w;
      for (const auto& tag : wj)
        w.push_back(nch::moments::parse_letter_tag(tag.get<std::string>()));
      words.push_back(std::move(w));
    }
  } else {
    words.push_back({});
    words.push_back({nch::moments::Letter::u()});
    for (int i = 0; i < static_cast<int>(table.letters.size()); ++i)
      words.push_back({nch::moments::Letter::alg(i)});
  }

  const CMat gram = nch::moments::state_gram(table, words);
  const double lmin = nch::matrixcore::min_real_eig(gram);
  emit(g, Json{{"gram", nch::io::matrix_to_json(gram)},
               {"lambda_min", lmin},
               {"psd", lmin >= -g.tol.scaled(1.0)}});
  return 0;
}

int cmd_roundtrip(const GlobalOpts& g, const std::string& rep_file, int samples,
                  int fresh, double max_error, double model_noise) {
  auto rep = nch::io::rep_from_json(nch::io::load_json_file(rep_file));
  nch::freefunc::validate(rep, g.tol);
  const auto delta = nch::FreePolynomial::identity(rep.alpha.algebra);

  Json report = run_report_header("roundtrip", {rep_file}, g.seed);
  report["samples"] = samples;
  report["fresh"] = fresh;

  if (model_noise > 0.0) {
    // Fault-injection path: perturb the synthesized model and let the
    // Gramian check reject it.
    nch::sampling::Rng rng(g.seed);
    std::vector<nch::LeveledElement> points;
    points.push_back(nch::zero_element(rep.alpha.algebra, 1));
    for (int i = 1; i < samples; ++i)
      points.push_back(nch::sampling::random_ball_point(
          rng, rep.alpha.algebra, 1 + (i % 2), 0.3, 0.8));
    auto model = nch::lurking::model_from_rep(rep, delta, points, g.tol);
    for (auto& s : model.samples)
      s.h += model_noise *
             nch::sampling::gaussian_matrix(rng, s.h.rows(), s.h.cols());
    nch::lurking::build_gramian_columns(model, g.tol);  // throws
    return 0;
  }

  const auto result =
      nch::lurking::roundtrip_verify(rep, delta, samples, fresh, g.seed, g.tol);
  report["gram_residual"] = result.gram_residual;
  report["U_defect"] = result.U_defect;
  report["V_defect"] = result.V_defect;
  report["roundtrip_max_error"] = result.roundtrip_max_error;
  report["max_error_allowed"] = max_error;
  const bool pass = result.roundtrip_max_error <= max_error;
  report["pass"] = pass;
  emit(g, report);
  return pass ? 0 : 4;
}

int cmd_demo_nonuniq(const GlobalOpts& g, const std::string& kind, int n) {
  using nch::freefunc::HerglotzRepresentation;
  nch::nonuniq::validate_truncation(n);

  HerglotzRepresentation rep1, rep2;
  nch::moments::Word word;
  std::vector<CMat> letters;
  std::string word_desc;

  if (kind == "haar") {
    const nch::AlgebraDescriptor alg{nch::AlgebraKind::Full, 2};
    CMat rho1 = CMat::Zero(2, 2), rho2 = CMat::Zero(2, 2);
    rho1(0, 0) = 1.0;
    rho2(1, 1) = 1.0;
    std::tie(rep1, rep2) = nch::nonuniq::haar_pair_states(alg, rho1, rho2, n, g.tol);
    CMat b = CMat::Zero(2, 2);
    b(0, 0) = 1.0;
    letters = {b};
    word = {nch::moments::Letter::u(), nch::moments::Letter::alg(0),
            nch::moments::Letter::ustar()};
    word_desc = "u b u*";
  } else if (kind == "crossed") {
    const int k = 2;
    CMat q = CMat::Identity(k, k);
    q(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi / n);
    rep1 = nch::nonuniq::crossed_product_expectation(
        nch::nonuniq::AlgebraMap::identity({nch::AlgebraKind::Full, k}), n, g.tol);
    rep2 = nch::nonuniq::crossed_product_expectation(
        nch::nonuniq::AlgebraMap::inner(q), n, g.tol);
    CMat b = CMat::Zero(k, k);
    b(0, 1) = 1.0;
    letters = {b};
    word = {nch::moments::Letter::u(), nch::moments::Letter::alg(0),
            nch::moments::Letter::ustar()};
    word_desc = "u b u*";
  } else if (kind == "shift") {
    const int k = 3;
    rep1 = nch::nonuniq::shift_endomorphism_expectation(
        nch::nonuniq::AlgebraMap::coordinate(k, {0, 0, 0}), n, g.tol);
    rep2 = nch::nonuniq::shift_endomorphism_expectation(
        nch::nonuniq::AlgebraMap::coordinate(k, {1, 1, 1}), n, g.tol);
    CMat b = CMat::Zero(k, k);
    b(0, 0) = 1.0;
    letters = {b};
    word = {nch::moments::Letter::ustar(), nch::moments::Letter::alg(0),
            nch::moments::Letter::u()};
    word_desc = "u* b u";
  } else {
    throw nch::StructuralError("demo-nonuniq: kind must be haar, crossed or shift");
  }

  const CMat m1 = nch::moments::direct_moment(rep1, letters, word);
  const CMat m2 = nch::moments::direct_moment(rep2, letters, word);
  const double gap = nch::matrixcore::opnorm(m1 - m2);

  // Agreement scan over ||X|| <= 1/2.
  nch::sampling::Rng rng(g.seed);
  std::vector<nch::LeveledElement> points;
  for (int i = 0; i < 32; ++i)
    points.push_back(nch::sampling::random_ball_point(
        rng, rep1.alpha.algebra, 1 + (i % 2), 0.25, 0.5));
  const auto devs = nch::batch::pair_deviation_many(rep1, rep2, points,
                                                    nch::batch::Exec::parallel,
                                                    g.tol);
  const double sup = devs.empty() ? 0.0
                                  : *std::max_element(devs.begin(), devs.end());
  const double bound = 4.0 * std::pow(2.0, -n);

  Json report = run_report_header("demo-nonuniq", {}, g.seed);
  report["kind"] = kind;
  report["N"] = n;
  report["rep1"] = nch::io::rep_to_json(rep1);
  report["rep2"] = nch::io::rep_to_json(rep2);
  report["distinguishing_word"] = word_desc;
  report["moment1"] = nch::io::matrix_to_json(m1);
  report["moment2"] = nch::io::matrix_to_json(m2);
  report["moment_gap"] = gap;
  report["g_sup_deviation"] = sup;
  report["g_bound"] = bound;
  const bool pass = gap >= 0.1 && sup <= bound;
  report["pass"] = pass;
  emit(g, report);
  return pass ? 0 : 4;
}

int cmd_classical_transform(const GlobalOpts& g, const std::string& measure_file,
                            double re, double im) {
  auto mu = nch::io::measure_from_json(nch::io::load_json_file(measure_file));
  const Complex h = nch::classical::herglotz_transform(mu, Complex(re, im));
  emit(g, Json::array({h.real(), h.imag()}));
  return 0;
}

int cmd_classical_moments(const GlobalOpts& g, const std::string& measure_file,
                          int count) {
  auto mu = nch::io::measure_from_json(nch::io::load_json_file(measure_file));
  emit(g, nch::io::complex_seq_to_json(nch::classical::moments_of(mu, count)));
  return 0;
}

int cmd_toeplitz_check(const GlobalOpts& g, const std::string& seq_file) {
  auto seq = nch::io::complex_seq_from_json(nch::io::load_json_file(seq_file));
  const auto rep = nch::classical::toeplitz_psd_check(seq, g.tol);
  emit(g, Json{{"ok", rep.ok}, {"lambda_min", rep.lambda_min}});
  return 0;
}

int cmd_validate(const GlobalOpts& g, const std::string& file,
                 const std::string& kind) {
  const Json j = nch::io::load_json_file(file);
  if (kind == "rep") {
    nch::freefunc::validate(nch::io::rep_from_json(j), g.tol);
  } else if (kind == "measure") {
    nch::io::measure_from_json(j);
  } else if (kind == "point") {
    nch::io::point_from_json(j);
  } else if (kind == "table") {
    nch::moments::validate_table(nch::io::table_from_json(j), g.tol);
  } else {
    throw nch::StructuralError("validate: kind must be rep, measure, point or table");
  }
  emit(g, Json{{"file", file}, {"kind", kind}, {"valid", true}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free Herglotz realization toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env_seed = std::getenv("NCH_SEED"))
    g.seed = std::strtoull(env_seed, nullptr, 10);
  app.add_option("--tol-abs", g.tol.absolute, "absolute tolerance");
  app.add_option("--tol-rel", g.tol.relative, "relative tolerance");
  auto* seed_opt = app.add_option("--seed", g.seed, "random seed");
  app.add_option("--json-out", g.json_out, "also write the JSON output here");

  std::string rep_file, point_file, matrix_file, measure_file, seq_file,
      table_file, letters_file, words_file, file, kind, direction = "to-schur";
  int samples = 12, fresh = 20, max_len = 3, random_letters = 0, count = 8,
      n_trunc = 8;
  double re = 0, im = 0, max_error = 1e-6, model_noise = 0.0;
  bool check = false;

  auto* c_eval = app.add_subcommand("eval", "evaluate h(X) from a representation");
  c_eval->add_option("rep", rep_file)->required();
  c_eval->add_option("point", point_file)->required();

  auto* c_cayley = app.add_subcommand("cayley", "Cayley transform of a matrix");
  c_cayley->add_option("matrix", matrix_file)->required();
  c_cayley->add_option("--direction", direction,
                       "to-schur (default) or to-herglotz");

  auto* c_moments =
      app.add_subcommand("moments", "moment table of a representation");
  c_moments->add_option("rep", rep_file)->required();
  c_moments->add_option("--letters", letters_file, "JSON array of matrices");
  c_moments->add_option("--random-letters", random_letters);
  c_moments->add_option("--max-len", max_len);
  c_moments->add_flag("--check", check, "cross-check nilpotent extraction");

  auto* c_gram = app.add_subcommand("gram", "block Gram matrix of a moment table");
  c_gram->add_option("--table", table_file);
  c_gram->add_option("--rep", rep_file);
  c_gram->add_option("--letters", letters_file);
  c_gram->add_option("--max-len", max_len);
  c_gram->add_option("--words-file", words_file);

  auto* c_rt = app.add_subcommand("roundtrip", "model -> Gramian -> recovery round trip");
  c_rt->add_option("rep", rep_file)->required();
  c_rt->add_option("--samples", samples);
  c_rt->add_option("--fresh", fresh);
  c_rt->add_option("--max-error", max_error);
  c_rt->add_option("--model-noise", model_noise,
                   "fault injection: perturb the model before recovery");

  auto* c_demo = app.add_subcommand("demo-nonuniq", "non-uniqueness witnesses");
  c_demo->add_option("--kind", kind)->required();
  c_demo->add_option("--N", n_trunc, "truncation order (>= 2)");

  auto* c_ct = app.add_subcommand("classical-transform",
                                  "scalar Herglotz transform of a measure");
  c_ct->add_option("measure", measure_file)->required();
  c_ct->add_option("--re", re)->required();
  c_ct->add_option("--im", im);

  auto* c_cm = app.add_subcommand("classical-moments", "circle moments of a measure");
  c_cm->add_option("measure", measure_file)->required();
  c_cm->add_option("--count", count);

  auto* c_tp = app.add_subcommand("toeplitz-check",
                                  "Toeplitz positivity of a moment sequence");
  c_tp->add_option("moments", seq_file)->required();

  auto* c_val = app.add_subcommand("validate", "validate a JSON input file");
  c_val->add_option("file", file)->required();
  c_val->add_option("--kind", kind)->required();

  CLI11_PARSE(app, argc, argv);
  (void)seed_opt;  // --seed overrides the NCH_SEED default set above

  const auto t0 = std::chrono::steady_clock::now();
  int code = 5;
  try {
    if (*c_eval) code = cmd_eval(g, rep_file, point_file);
    else if (*c_cayley) code = cmd_cayley(g, matrix_file, direction);
    else if (*c_moments)
      code = cmd_moments(g, rep_file, letters_file, random_letters, max_len, check);
    else if (*c_gram)
      code = cmd_gram(g, table_file, rep_file, letters_file, max_len, words_file);
    else if (*c_rt)
      code = cmd_roundtrip(g, rep_file, samples, fresh, max_error, model_noise);
    else if (*c_demo) code = cmd_demo_nonuniq(g, kind, n_trunc);
    else if (*c_ct) code = cmd_classical_transform(g, measure_file, re, im);
    else if (*c_cm) code = cmd_classical_moments(g, measure_file, count);
    else if (*c_tp) code = cmd_toeplitz_check(g, seq_file);
    else if (*c_val) code = cmd_validate(g, file, kind);
  } catch (const nch::StructuralError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    code = 2;
  } catch (const nch::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    code = 3;
  } catch (const nch::InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << '\n';
    code = 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    code = 5;
  }
  // Timing goes to stderr so reports stay byte-identical across runs.
  const auto wall =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  std::cerr << "# wall-time-ms: " << wall << '\n';
  return code;
}
