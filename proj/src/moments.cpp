#include "nch/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"

namespace nch::moments {

using matrixcore::opnorm;

Word involution(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Letter l = *it;
    switch (l.kind) {
      case Letter::Kind::U: l.kind = Letter::Kind::UStar; break;
      case Letter::Kind::UStar: l.kind = Letter::Kind::U; break;
      case Letter::Kind::Alg: l.starred = !l.starred; break;
    }
    out.push_back(l);
  }
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string letter_tag(const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::U: return "u";
    case Letter::Kind::UStar: return "u*";
    case Letter::Kind::Alg:
      return "b" + std::to_string(l.index) + (l.starred ? "*" : "");
  }
  return "?";
}

Letter parse_letter_tag(const std::string& tag) {
  if (tag == "u") return Letter::u();
  if (tag == "u*") return Letter::ustar();
  if (!tag.empty() && tag[0] == 'b') {
    std::string body = tag.substr(1);
    bool star = false;
    if (!body.empty() && body.back() == '*') {
      star = true;
      body.pop_back();
    }
    try {
      size_t pos = 0;
      int idx = std::stoi(body, &pos);
      if (pos == body.size() && idx >= 0) return Letter::alg(idx, star);
    } catch (const std::exception&) {
    }
  }
  throw StructuralError("malformed letter tag: '" + tag + "'");
}

std::string word_key(const Word& w) {
  std::string key;
  for (const auto& l : w) {
    if (!key.empty()) key += '.';
    key += letter_tag(l);
  }
  return key;
}

CMat direct_moment(const freefunc::HerglotzRepresentation& rep,
                   const std::vector<CMat>& letters, const Word& word) {
  const Eigen::Index m = rep.ambient_dim();
  CMat acc = CMat::Identity(m, m);
  for (const auto& l : word) {
    switch (l.kind) {
      case Letter::Kind::U: acc = (acc * rep.U).eval(); break;
      case Letter::Kind::UStar: acc = (acc * rep.U.adjoint()).eval(); break;
      case Letter::Kind::Alg: {
        if (l.index < 0 || l.index >= static_cast<int>(letters.size()))
          throw StructuralError("direct_moment: letter index out of range");
        CMat b = letters[l.index];
        if (l.starred) b = b.adjoint().eval();
        acc = (acc * rep.alpha.apply(b)).eval();
        break;
      }
    }
  }
  return rep.V.adjoint() * acc * rep.V;
}

const CMat* MomentTable::find(const Word& w) const {
  auto it = entries.find(word_key(w));
  return it == entries.end() ? nullptr : &it->second.second;
}

namespace {

void enumerate_words(const std::vector<Letter>& alphabet, int max_length,
                     const std::function<void(const Word&)>& visit) {
  Word w;
  std::function<void(int)> rec = [&](int remaining) {
    visit(w);
    if (remaining == 0) return;
    for (const auto& l : alphabet) {
      w.push_back(l);
      rec(remaining - 1);
      w.pop_back();
    }
  };
  rec(max_length);
}

}  // namespace

MomentTable table_from_rep(const freefunc::HerglotzRepresentation& rep,
                           const std::vector<CMat>& letters, int max_length) {
  if (max_length < 0)
    throw StructuralError("table_from_rep: negative max_length");
  MomentTable table;
  table.algebra = rep.alpha.algebra;
  table.output_dim = rep.output_dim();
  table.max_length = max_length;
  table.letters = letters;

  std::vector<Letter> alphabet{Letter::u(), Letter::ustar()};
  for (int i = 0; i < static_cast<int>(letters.size()); ++i) {
    alphabet.push_back(Letter::alg(i, false));
    alphabet.push_back(Letter::alg(i, true));
  }
  enumerate_words(alphabet, max_length, [&](const Word& w) {
    table.entries.emplace(word_key(w),
                          std::make_pair(w, direct_moment(rep, letters, w)));
  });
  return table;
}

void validate_table(const MomentTable& table, const Tolerance& tol) {
  const CMat* unit = table.find(Word{});
  if (!unit) throw StructuralError("moment table: identity word missing");
  const Eigen::Index d = table.output_dim;
  if (opnorm(*unit - CMat::Identity(d, d)) > tol.scaled(1.0))
    throw StructuralError("moment table: phi(1) != I (unitality)");
  for (const auto& [key, entry] : table.entries) {
    const Word star = involution(entry.first);
    if (const CMat* sval = table.find(star)) {
      if (opnorm(*sval - entry.second.adjoint()) >
          tol.scaled(std::max(1.0, opnorm(entry.second))))
        throw StructuralError("moment table: involution inconsistency at '" +
                              key + "'");
    }
  }
}

CMat state_gram(const MomentTable& table, const std::vector<Word>& words) {
  const Eigen::Index d = table.output_dim;
  const Eigen::Index n = static_cast<Eigen::Index>(words.size());
  CMat g(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Word prod = concat(involution(words[j]), words[i]);
      const CMat* val = table.find(prod);
      if (!val)
        throw InconsistencyError("state_gram: insufficient truncation, word '" +
                                 word_key(prod) + "' missing");
      g.block(j * d, i * d, d, d) = *val;
    }
  return g;
}

LeveledElement nilpotent_lift(const std::vector<CMat>& letters,
                              const AlgebraDescriptor& alg, double scale,
                              const Tolerance& tol) {
  if (letters.empty()) throw StructuralError("nilpotent_lift: empty letter list");
  const int k = alg.k;
  double maxnorm = 0.0;
  for (const auto& b : letters) {
    if (b.rows() != k || b.cols() != k)
      throw StructuralError("nilpotent_lift: letter has wrong size");
    maxnorm = std::max(maxnorm, opnorm(b));
  }
  if (scale <= 0.0) scale = 0.5 / (maxnorm + tol.absolute + 1e-300);
  const int n = static_cast<int>(letters.size());
  CMat m = CMat::Zero(static_cast<Eigen::Index>(n + 1) * k,
                      static_cast<Eigen::Index>(n + 1) * k);
  for (int i = 0; i < n; ++i)
    m.block(i * k, (i + 1) * k, k, k) = scale * letters[i];
  return make_leveled(alg, n + 1, std::move(m), tol);
}

ExtractedMoments extract_moments(const freefunc::Evaluator& h_eval,
                                 const std::vector<CMat>& letters,
                                 const AlgebraDescriptor& alg, double scale,
                                 const Tolerance& tol) {
  if (scale <= 0.0) {
    double maxnorm = 0.0;
    for (const auto& b : letters) maxnorm = std::max(maxnorm, opnorm(b));
    scale = 0.5 / (maxnorm + tol.absolute + 1e-300);
  }
  const double used = scale;
  const int n = static_cast<int>(letters.size());
  const LeveledElement x = nilpotent_lift(letters, alg, used, tol);
  const CMat h = h_eval(x);
  if (h.rows() % (n + 1) != 0)
    throw StructuralError("extract_moments: evaluator output size mismatch");
  const Eigen::Index d = h.rows() / (n + 1);
  const CMat upper = 0.5 * (h - CMat::Identity(h.rows(), h.cols()));

  ExtractedMoments out;
  out.scale = used;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const int ucount = j - i + 1;
      out.values[{i, j}] =
          upper.block((i - 1) * d, j * d, d, d) / std::pow(used, ucount);
    }
  return out;
}

namespace {

CMat letter_on_output(const CMat& b, const AlgebraDescriptor& alg,
                      Eigen::Index d) {
  if (alg.k == 1) return b(0, 0) * CMat::Identity(d, d);
  if (d == alg.k) return b;
  throw StructuralError(
      "algebra does not act on the output space (need d == k or k == 1)");
}

}  // namespace

double module_property_residual(const freefunc::Evaluator& h_eval,
                                const std::vector<CMat>& b_list, const CMat& b,
                                const AlgebraDescriptor& alg,
                                Eigen::Index output_dim, const Tolerance& tol) {
  if (opnorm(b) >= 1.0)
    throw DomainError("module_property_residual: ||b|| must be < 1");
  const LeveledElement x = nilpotent_lift(b_list, alg, 0.0, tol);
  const int n = static_cast<int>(b_list.size());
  const int k = alg.k;

  // X (I_n (+) b) at the algebra level.
  CMat right = CMat::Identity(x.matrix.rows(), x.matrix.cols());
  right.block(n * k, n * k, k, k) = b;
  const LeveledElement xb = make_leveled(alg, n + 1, x.matrix * right, tol);

  const CMat gx = h_eval(x);
  const CMat gxb = h_eval(xb);
  const Eigen::Index d = output_dim;
  const CMat b_out = letter_on_output(b, alg, d);
  CMat right_out = CMat::Identity(gx.rows(), gx.cols());
  right_out.block(n * d, n * d, d, d) = b_out;

  const CMat eye = CMat::Identity(gx.rows(), gx.cols());
  return opnorm((gxb - eye) - (gx - eye) * right_out);
}

ConditionalExpectationReport conditional_expectation_check(
    const freefunc::HerglotzRepresentation& rep, int word_samples,
    unsigned long long seed, const Tolerance& tol) {
  (void)tol;
  ConditionalExpectationReport report;
  const auto& alg = rep.alpha.algebra;
  const Eigen::Index d = rep.output_dim();

  // Spectral gap: widest arc of the circle free of eigenvalues of U.
  Eigen::ComplexEigenSolver<CMat> es(rep.U, false);
  std::vector<double> args;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    args.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(args.begin(), args.end());
  if (!args.empty()) {
    double gap = 2 * std::numbers::pi - (args.back() - args.front());
    for (size_t i = 1; i < args.size(); ++i)
      gap = std::max(gap, args[i] - args[i - 1]);
    report.spectral_gap = gap;
  }

  sampling::Rng rng(seed);
  for (int t = 0; t < word_samples; ++t) {
    // Random letters in the open unit ball of B.
    std::vector<CMat> letters;
    const int letter_count = rng.uniform_int(1, 2);
    for (int i = 0; i < letter_count; ++i)
      letters.push_back(
          sampling::random_ball_point(rng, alg, 1, 0.2, 0.8).matrix);
    const CMat b = sampling::random_ball_point(rng, alg, 1, 0.2, 0.8).matrix;
    const CMat b_out = letter_on_output(b, alg, d);

    const int len = rng.uniform_int(1, 4);
    Word w;
    for (int i = 0; i < len; ++i) {
      const int pick = rng.uniform_int(0, 1 + static_cast<int>(letters.size()));
      if (pick == 0)
        w.push_back(Letter::u());
      else if (pick == 1)
        w.push_back(Letter::ustar());
      else
        w.push_back(Letter::alg(pick - 2, rng.uniform_int(0, 1) == 1));
    }

    // phi(w b) vs phi(w) b.
    const int bidx = static_cast<int>(letters.size());
    std::vector<CMat> with_b = letters;
    with_b.push_back(b);
    Word wb = w;
    wb.push_back(Letter::alg(bidx, false));
    const CMat lhs_r = direct_moment(rep, with_b, wb);
    const CMat rhs_r = direct_moment(rep, with_b, w) * b_out;
    report.right_module_residual =
        std::max(report.right_module_residual, opnorm(lhs_r - rhs_r));

    // phi(b* w*) vs b* phi(w*).
    const Word wstar = involution(w);
    Word bstar_wstar;
    bstar_wstar.push_back(Letter::alg(bidx, true));
    bstar_wstar = concat(bstar_wstar, wstar);
    const CMat lhs_l = direct_moment(rep, with_b, bstar_wstar);
    const CMat rhs_l = b_out.adjoint() * direct_moment(rep, with_b, wstar);
    report.left_module_residual =
        std::max(report.left_module_residual, opnorm(lhs_l - rhs_l));
    ++report.words_checked;
  }
  return report;
}

}  // namespace nch::moments
