#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cshape/spec_file.hpp"
#include "report.hpp"

using namespace cshape;
using namespace cshape::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path, 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Letter letter_named(const Substitution& z, const std::string& name) {
  for (int a = 0; a < z.size(); ++a)
    if (z.name(static_cast<Letter>(a)) == name) return static_cast<Letter>(a);
  throw SpecError("unknown letter '" + name + "'", 0, 0);
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw SpecError("bad rational '" + s + "'", 0, 0);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-shape substitution analysis"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);

  std::string file, out_path, letter, perm_arg, mode_arg = "bijective";
  std::vector<std::string> vectors;
  Budgets budgets;
  int n = 3;
  int window = 2;
  std::optional<int> radius;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "substitution file")->required();
    sub->add_option("--max-level", budgets.max_level, "level budget")->capture_default_str();
    sub->add_option("--max-radius", budgets.max_radius, "radius budget")->capture_default_str();
    sub->add_option("--cell-cap", budgets.cell_cap, "cell budget")->capture_default_str();
    sub->add_option("--seed", budgets.seed, "seed recorded in the report")->capture_default_str();
    sub->add_option("-o,--output", out_path, "output file");
  };

  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"validate", "iterate", "kset", "language", "tile", "polytope", "directions", "height", "eigen",
                           "reduce", "aut", "symmetry", "verify", "report"}) {
    subs[name] = app.add_subcommand(name);
    add_common(subs[name]);
  }
  subs["iterate"]->add_option("-n", n, "number of iterations")->capture_default_str();
  subs["iterate"]->add_option("--letter", letter, "starting letter (default: first)");
  subs["tile"]->add_option("-n", n, "approximation level")->capture_default_str();
  subs["language"]->add_option("--radius", radius, "box radius of the shape (default: K)");
  subs["eigen"]->add_option("--vector", vectors, "rational vector such as \"1/2 0\"")->required();
  subs["aut"]->add_option("--mode", mode_arg, "bijective or general")->check(CLI::IsMember({"bijective", "general"}));
  subs["verify"]->add_option("--perm", perm_arg, "letter images, in alphabet order (default: identity)");
  subs["verify"]->add_option("--window", window, "box radius of the checked window")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  std::string bytes;
  std::optional<Substitution> zs;
  try {
    bytes = read_file(file);
    zs = parse_spec(bytes);
  } catch (const SpecError& e) {
    std::cerr << "error: " << file << ":" << e.what() << "\n";
    return 2;
  }
  const Substitution& z = *zs;

  Json doc = header(bytes, budgets);
  Status st;
  int code = 0;
  try {
    if (cmd == "validate") doc["validate"] = validate_section(z);
    else if (cmd == "iterate") doc["iterate"] = iterate_section(z, n, letter.empty() ? 0 : letter_named(z, letter), budgets);
    else if (cmd == "kset") doc["kset"] = kset_section(z);
    else if (cmd == "language") doc["language"] = language_section(z, radius, budgets);
    else if (cmd == "tile") doc["tile"] = tile_section(z, n, out_path, budgets);
    else if (cmd == "polytope") doc["polytope"] = polytope_section(z, budgets);
    else if (cmd == "directions") doc["directions"] = directions_section(z, budgets);
    else if (cmd == "height") doc["height"] = height_section(z, budgets, st);
    else if (cmd == "eigen") {
      std::vector<QVec> xs;
      for (const auto& v : vectors) {
        const auto parts = split(v);
        if (static_cast<int>(parts.size()) != z.dim()) throw SpecError("vector needs " + std::to_string(z.dim()) + " entries", 0, 0);
        QVec x(z.dim());
        for (int i = 0; i < z.dim(); ++i) x(i) = parse_rational(parts[static_cast<std::size_t>(i)]);
        xs.push_back(x);
      }
      doc["eigen"] = eigen_section(z, xs, budgets, st);
    } else if (cmd == "reduce") doc["reduce"] = reduce_section(z, budgets);
    else if (cmd == "aut")
      doc["aut"] = aut_section(z, mode_arg == "general" ? AutomorphismMode::general : AutomorphismMode::bijective, budgets, st);
    else if (cmd == "symmetry") doc["symmetry"] = symmetry_section(z, budgets, st);
    else if (cmd == "verify") {
      std::vector<Letter> perm;
      if (perm_arg.empty()) {
        for (int a = 0; a < z.size(); ++a) perm.push_back(static_cast<Letter>(a));
      } else {
        for (const auto& t : split(perm_arg)) perm.push_back(letter_named(z, t));
        if (static_cast<int>(perm.size()) != z.size()) throw SpecError("--perm needs one image per letter", 0, 0);
      }
      doc["verify"] = verify_section(z, perm, window, budgets);
    } else if (cmd == "report") {
      doc["report"] = full_report(z, budgets, st);
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    st.budget_exhausted = true;
    doc["error"] = {{"budget_exhausted", true}, {"message", e.what()}};
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (st.budget_exhausted) {
    doc["budget_exhausted"] = true;
    code = 3;
  }

  const std::string text = doc.dump(2) + "\n";
  if (!out_path.empty() && cmd != "tile") {
    std::ofstream(out_path) << text;
  } else {
    std::cout << text;
  }
  return code;
}
