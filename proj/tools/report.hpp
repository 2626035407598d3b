#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cshape/morphisms.hpp"

namespace cshape::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "0.1.0";

struct Budgets {
  int max_level = 5;
  int max_radius = 6;
  std::size_t cell_cap = default_cell_cap;
  std::uint64_t seed = 0;
};

/// Raised budget flags recorded while building sections.
struct Status {
  bool budget_exhausted = false;
};

std::string sha256_hex(const std::string& bytes);
Json header(const std::string& input_bytes, const Budgets& b);

Json exact(Int v);
Json exact(const Rational& v);
Json exact(const IVec& v);
Json exact(const std::vector<IVec>& pts);
Json exact(const IMat& m);
Json bound(double v);

Json validate_section(const Substitution& z);
Json iterate_section(const Substitution& z, int n, Letter a, const Budgets& b);
Json kset_section(const Substitution& z);
Json language_section(const Substitution& z, std::optional<int> radius, const Budgets& b);
Json tile_section(const Substitution& z, int n, const std::string& out, const Budgets& b);
Json polytope_section(const Substitution& z, const Budgets& b);
Json directions_section(const Substitution& z, const Budgets& b);
Json height_section(const Substitution& z, const Budgets& b, Status& st);
Json eigen_section(const Substitution& z, const std::vector<QVec>& xs, const Budgets& b, Status& st);
Json reduce_section(const Substitution& z, const Budgets& b);
Json aut_section(const Substitution& z, AutomorphismMode mode, const Budgets& b, Status& st);
Json symmetry_section(const Substitution& z, const Budgets& b, Status& st);
Json bounds_section(const Substitution& z);
Json verify_section(const Substitution& z, const std::vector<Letter>& perm, int window, const Budgets& b);

/// Every analysis in order; sections that exceed a budget are marked and skipped.
Json full_report(const Substitution& z, const Budgets& b, Status& st);

}  // namespace cshape::cli
