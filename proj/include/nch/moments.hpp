#ifndef NCH_MOMENTS_HPP
#define NCH_MOMENTS_HPP

// Moment extraction through nilpotent amplification, direct word moments,
// finite moment tables with Gram positivity, and the conditional-expectation
// diagnostics.

#include <map>
#include <string>
#include <vector>

#include "nch/algebra.hpp"
#include "nch/freefunc.hpp"
#include "nch/types.hpp"

namespace nch::moments {

// One letter of a word in the universal algebra generated by B and a free
// unitary u: either u, u*, or a registered algebra element (possibly
// starred).
struct Letter {
  enum class Kind { U, UStar, Alg } kind = Kind::U;
  int index = -1;        // into the table's letter registry, Alg only
  bool starred = false;  // Alg only

  static Letter u() { return {Kind::U, -1, false}; }
  static Letter ustar() { return {Kind::UStar, -1, false}; }
  static Letter alg(int idx, bool star = false) {
    return {Kind::Alg, idx, star};
  }
  bool operator==(const Letter&) const = default;
};

// Empty word = identity.
using Word = std::vector<Letter>;

Word involution(const Word& w);
Word concat(const Word& a, const Word& b);
std::string word_key(const Word& w);

// Tag form used for serialization: "u", "u*", "b3", "b3*".
std::string letter_tag(const Letter& l);
Letter parse_letter_tag(const std::string& tag);

// phi(w) = V* (product of U, U*, alpha(b)) V; the brute-force oracle for the
// nilpotent extraction.  Empty word gives the identity.
CMat direct_moment(const freefunc::HerglotzRepresentation& rep,
                   const std::vector<CMat>& letters, const Word& word);

// Finite truncation of an operator-valued state: word -> d x d value over a
// fixed letter registry.
struct MomentTable {
  AlgebraDescriptor algebra;
  Eigen::Index output_dim = 0;
  int max_length = 0;
  std::vector<CMat> letters;
  std::map<std::string, std::pair<Word, CMat>> entries;

  const CMat* find(const Word& w) const;
};

// Populates a table with every word over {u, u*, b_i, b_i*} up to
// max_length, evaluated by direct_moment.
MomentTable table_from_rep(const freefunc::HerglotzRepresentation& rep,
                           const std::vector<CMat>& letters, int max_length);

// Structural checks on a table: phi(1) = I, involution consistency.
void validate_table(const MomentTable& table, const Tolerance& tol = {});

// Block Gram matrix G_{ij} = phi(w_j* w_i); throws InconsistencyError naming
// the first missing product word.
CMat state_gram(const MomentTable& table, const std::vector<Word>& words);

// Superdiagonal lift of n algebra letters: scale * b_i on the (i-1, i)
// block; (n+1)-nilpotent by construction.  scale <= 0 picks the default
// 0.5 / (max ||b_i|| + tol.absolute).
LeveledElement nilpotent_lift(const std::vector<CMat>& letters,
                              const AlgebraDescriptor& alg, double scale = 0.0,
                              const Tolerance& tol = {});

struct ExtractedMoments {
  // moment(i, j) = phi(u b_i u b_{i+1} ... u b_j), 1-based contiguous ranges.
  std::map<std::pair<int, int>, CMat> values;
  double scale = 0.0;
};

// Reads all contiguous-subword moments from one evaluation of the function
// at the nilpotent lift: block (i-1, j) of (h(X) - I)/2 rescaled by the
// word's u-count.
ExtractedMoments extract_moments(const freefunc::Evaluator& h_eval,
                                 const std::vector<CMat>& letters,
                                 const AlgebraDescriptor& alg,
                                 double scale = 0.0,
                                 const Tolerance& tol = {});

// || g(X (I (+) b)) - I - (g(X) - I)(I (+) b) || for the nilpotent lift of
// b_list; vanishes when the state is a conditional expectation.  Requires
// the algebra to act on the output space (d == k, or k == 1).
double module_property_residual(const freefunc::Evaluator& h_eval,
                                const std::vector<CMat>& b_list, const CMat& b,
                                const AlgebraDescriptor& alg,
                                Eigen::Index output_dim,
                                const Tolerance& tol = {});

struct ConditionalExpectationReport {
  double spectral_gap = 0.0;        // widest eigenvalue-free arc of U
  double right_module_residual = 0.0;  // max ||phi(w b) - phi(w) b||
  double left_module_residual = 0.0;   // max ||phi(b* w*) - b* phi(w*)||
  int words_checked = 0;
};

// Samples words and letters and reports the conditional-expectation word
// residuals plus the spectral gap of U on the circle.  Diagnostic.
ConditionalExpectationReport conditional_expectation_check(
    const freefunc::HerglotzRepresentation& rep, int word_samples,
    unsigned long long seed = 1, const Tolerance& tol = {});

}  // namespace nch::moments

#endif
