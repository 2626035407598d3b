#include "report.hpp"

#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "cshape/spec_file.hpp"

namespace cshape::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

Json header(const std::string& input_bytes, const Budgets& b) {
  Json j;
  j["tool"] = {{"name", "cshape"}, {"version", tool_version}};
  j["input"] = {{"sha256", sha256_hex(input_bytes)}};
  j["budgets"] = {{"max_level", exact(Int{b.max_level})},
                  {"max_radius", exact(Int{b.max_radius})},
                  {"cell_cap", exact(static_cast<Int>(b.cell_cap))},
                  {"seed", exact(static_cast<Int>(b.seed))}};
  return j;
}

namespace {

Json raw(const Rational& v) {
  if (v.is_integer()) return v.to_int();
  return v.str();
}

Json raw(const IVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json raw(const QVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(raw(v(i)));
  return a;
}

Json tagged(Json v, const char* kind) { return Json{{"value", std::move(v)}, {"kind", kind}}; }

Json names(const Substitution& z, const Word& w) {
  Json a = Json::array();
  for (Letter c : w) a.push_back(z.name(c));
  return a;
}

Json exact_q(const std::vector<QVec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(raw(p));
  return tagged(a, "exact");
}

const char* status_name(ConeStatus s) {
  switch (s) {
    case ConeStatus::nondeterministic: return "nondeterministic";
    case ConeStatus::deterministic: return "deterministic";
    default: return "unknown";
  }
}

}  // namespace

Json exact(Int v) { return tagged(v, "exact"); }
Json exact(const Rational& v) { return tagged(raw(v), "exact"); }
Json exact(const IVec& v) { return tagged(raw(v), "exact"); }
Json exact(const std::vector<IVec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(raw(p));
  return tagged(a, "exact");
}
Json exact(const IMat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(raw(IVec(m.row(i).transpose())));
  return tagged(a, "exact");
}
Json bound(double v) { return tagged(v, "bound"); }

Json validate_section(const Substitution& z) {
  const auto prim = is_primitive(z);
  return {{"valid", true},
          {"dim", exact(Int{z.dim()})},
          {"letters", exact(Int{z.size()})},
          {"support_size", exact(static_cast<Int>(z.support().size()))},
          {"det_L", exact(det(z.L()))},
          {"primitive", prim.primitive},
          {"primitivity_power", exact(Int{prim.witness})},
          {"bijective", is_bijective(z)},
          {"bijective_on_extremities", is_bijective_on_extremities(z)},
          {"declared_aperiodic", z.declared_aperiodic}};
}

Json iterate_section(const Substitution& z, int n, Letter a, const Budgets& b) {
  const auto words = iterate(z, n, b.cell_cap);
  const auto Fn = iterated_support(z.L(), z.support(), n);
  std::vector<std::size_t> order(Fn.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return LexLess{}(Fn[i], Fn[j]); });
  Json cells = Json::array();
  for (std::size_t i : order) cells.push_back({raw(Fn[i]), z.name(words[a][i])});
  return {{"n", exact(Int{n})}, {"letter", z.name(a)}, {"size", exact(static_cast<Int>(Fn.size()))}, {"cells", cells}};
}

Json kset_section(const Substitution& z) {
  const auto K = k_set(z);
  const auto Kb = k_bar(z);
  const auto pc = pc4_power(z);
  return {{"K", exact(std::vector<IVec>(K.begin(), K.end()))},
          {"K_bar", exact(std::vector<IVec>(Kb.begin(), Kb.end()))},
          {"pc4_power", pc ? exact(Int{*pc}) : Json(nullptr)}};
}

Json language_section(const Substitution& z, std::optional<int> radius, const Budgets& b) {
  const LanguageGenerator gen(z, b.cell_cap);
  std::vector<IVec> shape;
  if (radius) {
    shape = box(IVec::Constant(z.dim(), -*radius), IVec::Constant(z.dim(), *radius));
  } else {
    const auto K = k_set(z);
    shape.assign(K.begin(), K.end());
  }
  const Language lang = gen.language(shape);
  Json words = Json::array();
  for (const auto& w : lang.words) words.push_back(names(z, w));
  Json out{{"shape", exact(lang.shape)}, {"count", exact(static_cast<Int>(lang.size()))}, {"words", words}};
  if (!radius) {
    Json ds = Json::array();
    for (const auto& d : difference_sets(lang))
      ds.push_back({{"W", exact(d.W)}, {"first", names(z, d.first)}, {"second", names(z, d.second)}});
    out["difference_sets"] = ds;
  }
  return out;
}

Json tile_section(const Substitution& z, int n, const std::string& out, const Budgets& b) {
  const auto t = tile_approximation(z.L(), z.support(), n, b.cell_cap);
  Json j{{"level", exact(Int{n})}, {"points", exact(static_cast<Int>(t.size()))}};
  if (!out.empty()) {
    const bool pgm = out.size() >= 4 && out.substr(out.size() - 4) == ".pgm";
    if (pgm) write_pgm(t, out, ImageParams{});
    else write_svg(t, out, ImageParams{});
    j["format"] = pgm ? "pgm" : "svg";
    j["output"] = out;
  }
  return j;
}

Json polytope_section(const Substitution& z, const Budgets& b) {
  const auto t = polytope_test(z.L(), z.support(), b.max_level);
  Json counts = Json::array();
  for (auto c : t.counts) counts.push_back(c);
  Json j{{"status", t.status == PolytopeTest::Status::yes ? "yes" : "unknown"},
         {"extreme_point_counts", tagged(counts, "exact")}};
  if (t.status == PolytopeTest::Status::yes) {
    j["level"] = exact(Int{t.level});
    j["digit_tile_hull"] = exact_q(digit_tile_hull(z.L(), z.support(), t.level).vertices);
  }
  const auto e = facet_normal_eigencheck(z.L(), z.support(), 8);
  Json facets = Json::array();
  for (const auto& f : e.facets)
    facets.push_back({{"normal", exact(f.normal)}, {"power", f.power ? exact(Int{*f.power}) : Json(nullptr)}});
  j["facet_normals"] = facets;
  j["all_eigenvalues_integer"] = e.all_eigenvalues_integer;
  return j;
}

Json directions_section(const Substitution& z, const Budgets& b) {
  const auto rep = direction_report(z, b.max_level, b.max_radius);
  Json cones = Json::array();
  for (const auto& c : rep.cones) {
    Json cj{{"dim", exact(Int{c.cone.dim})}, {"generators", exact(c.cone.generators)}, {"status", status_name(c.status)}};
    if (c.certificate) {
      const auto& ce = *c.certificate;
      cj["certificate"] = {{"W", exact(ce.W)}, {"k", exact(ce.k)}, {"n", exact(Int{ce.n})}, {"f", exact(ce.f)}};
    }
    if (c.radius) cj["radius"] = exact(Int{*c.radius});
    cones.push_back(cj);
  }
  return {{"stable_hull", rep.stable},
          {"hull_vertices", exact_q(rep.hull.vertices)},
          {"nondeterministic", exact(static_cast<Int>(rep.count(ConeStatus::nondeterministic)))},
          {"deterministic", exact(static_cast<Int>(rep.count(ConeStatus::deterministic)))},
          {"unknown", exact(static_cast<Int>(rep.count(ConeStatus::unknown)))},
          {"cones", cones}};
}

Json height_section(const Substitution& z, const Budgets& b, Status& st) {
  const auto h = height_lattice(z, 4, 64, b.cell_cap);
  if (h.partial) st.budget_exhausted = true;
  return {{"basis", exact(h.H.basis())},
          {"index", exact(h.H.index())},
          {"returns", exact(h.returns)},
          {"window", exact(h.window)},
          {"partial", h.partial}};
}

Json eigen_section(const Substitution& z, const std::vector<QVec>& xs, const Budgets& b, Status& st) {
  const auto h = height_lattice(z, 4, 64, b.cell_cap);
  if (h.partial) st.budget_exhausted = true;
  Json checks = Json::array();
  for (const auto& x : xs) checks.push_back({{"x", tagged(raw(x), "exact")}, {"eigenvalue", eigenvalue_check(x, z.L(), h.H)}});
  return {{"height_basis", exact(h.H.basis())}, {"checks", checks}};
}

Json reduce_section(const Substitution& z, const Budgets& b) {
  const auto r = is_reduced(z);
  Json classes = Json::array();
  for (const auto& c : r.classes) classes.push_back(names(z, Word(c.begin(), c.end())));
  Json j{{"reduced", r.reduced}, {"eta", exact(r.eta)}, {"classes", classes}};
  if (!r.reduced) {
    const auto red = reduce(z);
    j["reduced_substitution"] = serialize_spec(red.reduced);
    const auto ps = period_search(red.reduced, 2, b.cell_cap);
    j["periods"] = exact(ps.periods);
  }
  return j;
}

Json aut_section(const Substitution& z, AutomorphismMode mode, const Budgets& b, Status& st) {
  const auto g = automorphisms(z, mode, 1, 200000, b.cell_cap);
  if (g.partial) st.budget_exhausted = true;
  Json maps = Json::array();
  for (std::size_t i = 0; i < g.maps.size(); ++i) {
    Json m{{"radius", exact(g.maps[i].radius)}, {"table_size", exact(static_cast<Int>(g.maps[i].table.size()))}};
    if (mode == AutomorphismMode::bijective) m["permutation"] = names(z, Word(g.letter_perms[i].begin(), g.letter_perms[i].end()));
    maps.push_back(m);
  }
  return {{"mode", mode == AutomorphismMode::bijective ? "bijective" : "general"},
          {"quotient_order", exact(static_cast<Int>(g.order()))},
          {"closed", g.closed},
          {"partial", g.partial},
          {"maps", maps},
          {"multiplication", tagged(g.multiplication, "exact")}};
}

Json symmetry_section(const Substitution& z, const Budgets& b, Status& st) {
  const auto rep = direction_report(z, b.max_level, b.max_radius);
  const auto h = height_lattice(z, 4, 64, b.cell_cap);
  if (h.partial) st.budget_exhausted = true;
  try {
    const auto s = symmetry_candidates(z, rep, h.H);
    Json cands = Json::array();
    for (const auto& c : s.candidates)
      cands.push_back({{"M", exact(c.M)}, {"order", exact(Int{c.order})}, {"norm_bound", bound(c.norm_bound)}});
    return {{"hypothesis_met", true},
            {"normals", exact(s.normals)},
            {"count", exact(static_cast<Int>(s.candidates.size()))},
            {"finite_orders", s.finite_orders},
            {"distinct_mod_3", s.distinct_mod3},
            {"candidates", cands}};
  } catch (const std::domain_error& e) {
    return {{"hypothesis_met", false}, {"reason", e.what()}};
  }
}

Json bounds_section(const Substitution& z) {
  const auto r = radius_bound(z);
  const auto h = homomorphism_radius_bound(z, IMat::Identity(z.dim(), z.dim()));
  auto one = [](const RadiusBound& rb) {
    if (!rb.finite) return Json{{"finite", false}};
    return Json{{"finite", true},
                {"factor", exact(rb.factor)},
                {"f1_norm_squared", exact(rb.f1_norm_sq)},
                {"value", bound(rb.value())},
                {"radius", exact(rb.radius)}};
  };
  return {{"factor_radius", one(r)}, {"homomorphism_radius_identity", one(h)}};
}

Json verify_section(const Substitution& z, const std::vector<Letter>& perm, int window, const Budgets& b) {
  const auto res = verify_homomorphism(z, letter_block_map(z, perm), window, b.cell_cap);
  Json j{{"verified_up_to_window", res.verified}, {"window", exact(res.window)}};
  if (res.counterexample) {
    j["reason"] = res.reason;
    j["counterexample"] = {{"support", exact(res.counterexample->support)},
                           {"letters", names(z, res.counterexample->letters)}};
  }
  return j;
}

Json full_report(const Substitution& z, const Budgets& b, Status& st) {
  Json out;
  auto run = [&](const char* key, auto&& f) {
    try {
      out[key] = f();
    } catch (const BudgetExceeded& e) {
      st.budget_exhausted = true;
      out[key] = {{"budget_exhausted", true}, {"message", e.what()}};
    }
  };
  run("validate", [&] { return validate_section(z); });
  run("kset", [&] { return kset_section(z); });
  run("language", [&] { return language_section(z, std::nullopt, b); });
  run("polytope", [&] { return polytope_section(z, b); });
  run("directions", [&] { return directions_section(z, b); });
  run("height", [&] { return height_section(z, b, st); });
  run("reduce", [&] { return reduce_section(z, b); });
  run("aut", [&] { return aut_section(z, AutomorphismMode::bijective, b, st); });
  run("symmetry", [&] { return symmetry_section(z, b, st); });
  run("radius_bounds", [&] { return bounds_section(z); });
  return out;
}

}  // namespace cshape::cli
