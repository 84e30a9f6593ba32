#include <cstdio>

#include "twistlab/error.hpp"
#include "twistlab/json_io.hpp"

namespace twistlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::backend_mismatch: return "BackendMismatch";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::not_finite: return "NotFinite";
    case ErrorCode::invalid_group: return "InvalidGroup";
    case ErrorCode::invalid_factor_set: return "InvalidFactorSet";
    case ErrorCode::invalid_action: return "InvalidAction";
    case ErrorCode::not_unit_modulus: return "NotUnitModulus";
    case ErrorCode::not_a_subgroup: return "NotASubgroup";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::memory_budget_exceeded: return "MemoryBudgetExceeded";
    case ErrorCode::degenerate_after_retries: return "DegenerateAfterRetries";
    case ErrorCode::not_permuting: return "NotPermuting";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Json complex_list_to_json(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const auto& z : values) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

std::vector<Complex> complex_list_from_json(const Json& j) {
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& z : j) {
    if (z.is_number()) {
      out.emplace_back(z.get<double>(), 0.0);
    } else {
      if (!z.is_array() || z.size() != 2) throw Error(ErrorCode::parse_error, "complex value must be [re, im]");
      out.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  }
  return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twistlab
