#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistlab/linalg.hpp"
#include "json.hpp"

namespace twistlab {

using Json = nlohmann::json;

/// [[re, im], ...]
Json complex_list_to_json(const std::vector<Complex>& values);
std::vector<Complex> complex_list_from_json(const Json& j);

/// Dense matrix as nested rows of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);

/// FNV-1a 64-bit digest, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace twistlab
