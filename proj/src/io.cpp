#include "nch/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace nch::io {

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw StructuralError("expected complex entry as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw StructuralError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    data.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMat matrix_from_json(const Json& j) {
  const auto rows = need(j, "rows").get<Eigen::Index>();
  const auto cols = need(j, "cols").get<Eigen::Index>();
  const Json& data = need(j, "data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      data.size() != static_cast<size_t>(rows))
    throw StructuralError("matrix: shape inconsistency");
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = data[static_cast<size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<size_t>(cols))
      throw StructuralError("matrix: shape inconsistency");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
  }
  require_finite(m, "matrix");
  return m;
}

Json algebra_to_json(const AlgebraDescriptor& alg) {
  return Json{{"kind", alg.kind == AlgebraKind::Full ? "full" : "diagonal"},
              {"k", alg.k}};
}

AlgebraDescriptor algebra_from_json(const Json& j) {
  const std::string kind = need(j, "kind").get<std::string>();
  AlgebraDescriptor alg;
  if (kind == "full")
    alg.kind = AlgebraKind::Full;
  else if (kind == "diagonal")
    alg.kind = AlgebraKind::Diagonal;
  else
    throw StructuralError("algebra: kind must be 'full' or 'diagonal'");
  alg.k = need(j, "k").get<int>();
  if (alg.k < 1) throw StructuralError("algebra: k must be >= 1");
  return alg;
}

Json embedding_to_json(const UnitalEmbedding& e) {
  Json j = algebra_to_json(e.algebra);
  if (e.algebra.kind == AlgebraKind::Full) {
    j["s"] = e.multiplicity;
    j["W"] = matrix_to_json(e.conjugator);
  } else {
    Json projs = Json::array();
    for (const auto& p : e.projections) projs.push_back(matrix_to_json(p));
    j["projections"] = std::move(projs);
  }
  return j;
}

UnitalEmbedding embedding_from_json(const Json& j) {
  const AlgebraDescriptor alg = algebra_from_json(j);
  if (alg.kind == AlgebraKind::Full) {
    const auto s = need(j, "s").get<Eigen::Index>();
    CMat w;
    if (j.contains("W")) w = matrix_from_json(j.at("W"));
    return UnitalEmbedding::full(alg.k, s, std::move(w));
  }
  const Json& projs = need(j, "projections");
  if (!projs.is_array() || projs.size() != static_cast<size_t>(alg.k))
    throw StructuralError("embedding: projection count must equal k");
  std::vector<CMat> p;
  for (const auto& pj : projs) p.push_back(matrix_from_json(pj));
  return UnitalEmbedding::diagonal(std::move(p));
}

Json rep_to_json(const freefunc::HerglotzRepresentation& rep) {
  Json j{{"embedding", embedding_to_json(rep.alpha)},
         {"U", matrix_to_json(rep.U)},
         {"V", matrix_to_json(rep.V)}};
  if (rep.offset_T) j["offset_T"] = matrix_to_json(*rep.offset_T);
  return j;
}

freefunc::HerglotzRepresentation rep_from_json(const Json& j) {
  freefunc::HerglotzRepresentation rep;
  rep.alpha = embedding_from_json(need(j, "embedding"));
  rep.U = matrix_from_json(need(j, "U"));
  rep.V = matrix_from_json(need(j, "V"));
  if (j.contains("offset_T"))
    rep.offset_T = matrix_from_json(j.at("offset_T"));
  return rep;
}

Json point_to_json(const LeveledElement& x) {
  return Json{{"algebra", algebra_to_json(x.algebra)},
              {"level", x.level},
              {"matrix", matrix_to_json(x.matrix)}};
}

LeveledElement point_from_json(const Json& j) {
  const AlgebraDescriptor alg = algebra_from_json(need(j, "algebra"));
  const int level = need(j, "level").get<int>();
  return make_leveled(alg, level, matrix_from_json(need(j, "matrix")));
}

Json measure_to_json(const classical::CircleMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms)
    atoms.push_back(Json{{"theta", a.theta}, {"weight", a.weight}});
  return Json{{"atoms", std::move(atoms)}};
}

classical::CircleMeasure measure_from_json(const Json& j) {
  const Json& atoms = need(j, "atoms");
  if (!atoms.is_array()) throw StructuralError("measure: atoms must be an array");
  classical::CircleMeasure mu;
  for (const auto& aj : atoms)
    mu.atoms.push_back({need(aj, "theta").get<double>(),
                        need(aj, "weight").get<double>()});
  classical::validate(mu);
  return mu;
}

Json table_to_json(const moments::MomentTable& table) {
  Json letters = Json::array();
  for (const auto& b : table.letters) letters.push_back(matrix_to_json(b));
  Json entries = Json::array();
  for (const auto& [key, entry] : table.entries) {
    Json word = Json::array();
    for (const auto& l : entry.first) word.push_back(moments::letter_tag(l));
    entries.push_back(Json{{"word", std::move(word)},
                           {"value", matrix_to_json(entry.second)}});
  }
  return Json{{"algebra", algebra_to_json(table.algebra)},
              {"output_dim", table.output_dim},
              {"max_length", table.max_length},
              {"letters", std::move(letters)},
              {"entries", std::move(entries)}};
}

moments::MomentTable table_from_json(const Json& j) {
  moments::MomentTable table;
  table.algebra = algebra_from_json(need(j, "algebra"));
  table.output_dim = need(j, "output_dim").get<Eigen::Index>();
  table.max_length = need(j, "max_length").get<int>();
  for (const auto& lj : need(j, "letters")) {
    table.letters.push_back(matrix_from_json(lj));
  }
  for (const auto& ej : need(j, "entries")) {
    moments::Word w;
    for (const auto& tag : need(ej, "word"))
      w.push_back(moments::parse_letter_tag(tag.get<std::string>()));
    CMat value = matrix_from_json(need(ej, "value"));
    table.entries.emplace(moments::word_key(w),
                          std::make_pair(std::move(w), std::move(value)));
  }
  return table;
}

Json complex_seq_to_json(const std::vector<Complex>& seq) {
  Json arr = Json::array();
  for (const auto& z : seq) arr.push_back(complex_to_json(z));
  return arr;
}

std::vector<Complex> complex_seq_from_json(const Json& j) {
  if (!j.is_array()) throw StructuralError("expected an array of [re, im]");
  std::vector<Complex> seq;
  for (const auto& zj : j) seq.push_back(complex_from_json(zj));
  return seq;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw StructuralError("file '" + path + "' is not valid JSON: " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write file '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open file '" + path + "'");
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << hash;
  return os.str();
}

}  // namespace nch::io
