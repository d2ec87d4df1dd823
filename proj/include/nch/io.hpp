#ifndef NCH_IO_HPP
#define NCH_IO_HPP

// JSON schemas for the file formats the CLI speaks.  Complex entries are
// [re, im] pairs; matrices are {"rows", "cols", "data"} with row-major
// nested arrays.  Malformed files raise StructuralError.

#include <string>
#include <vector>

#include <json.hpp>

#include "nch/algebra.hpp"
#include "nch/classical.hpp"
#include "nch/freefunc.hpp"
#include "nch/moments.hpp"
#include "nch/types.hpp"

namespace nch::io {

using Json = nlohmann::json;

Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

Json algebra_to_json(const AlgebraDescriptor& alg);
AlgebraDescriptor algebra_from_json(const Json& j);

Json embedding_to_json(const UnitalEmbedding& e);
UnitalEmbedding embedding_from_json(const Json& j);

Json rep_to_json(const freefunc::HerglotzRepresentation& rep);
freefunc::HerglotzRepresentation rep_from_json(const Json& j);

Json point_to_json(const LeveledElement& x);
LeveledElement point_from_json(const Json& j);

Json measure_to_json(const classical::CircleMeasure& mu);
classical::CircleMeasure measure_from_json(const Json& j);

Json table_to_json(const moments::MomentTable& table);
moments::MomentTable table_from_json(const Json& j);

Json complex_seq_to_json(const std::vector<Complex>& seq);
std::vector<Complex> complex_seq_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// FNV-1a hash of a file's bytes, as a fixed-width hex string; used for the
// deterministic input digests in run reports.
std::string file_digest(const std::string& path);

}  // namespace nch::io

#endif
