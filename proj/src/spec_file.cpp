#include "cshape/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace cshape {

SpecError::SpecError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column;
};

struct Entry {
  int line;
  int key_column;
  std::vector<std::vector<Token>> rows;  // value split on ';' then whitespace
};

std::vector<Token> split_ws(const std::string& s, int base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({s.substr(i, j - i), base + static_cast<int>(i)});
    i = j;
  }
  return out;
}

Int parse_int(const Token& t, int line) {
  Int v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw SpecError("expected an integer, got '" + t.text + "'", line, t.column);
  return v;
}

}  // namespace

Substitution parse_spec(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto hash = raw.find('#');
    const std::string s = raw.substr(0, hash);
    if (std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const auto eq = s.find('=');
    const auto first = s.find_first_not_of(" \t");
    if (eq == std::string::npos) throw SpecError("expected 'key = value'", line, static_cast<int>(first) + 1);
    std::string key = s.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) throw SpecError("missing key", line, static_cast<int>(first) + 1);
    const bool known = key == "dim" || key == "alphabet" || key == "L" || key == "support" ||
                       key == "declared_aperiodic" || key.rfind("rule.", 0) == 0;
    if (!known) throw SpecError("unknown key '" + key + "'", line, static_cast<int>(first) + 1);
    if (entries.count(key)) throw SpecError("duplicate key '" + key + "'", line, static_cast<int>(first) + 1);
    Entry e{line, static_cast<int>(first) + 1, {}};
    std::size_t start = eq + 1;
    while (true) {
      const auto semi = s.find(';', start);
      const std::string part = s.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
      e.rows.push_back(split_ws(part, static_cast<int>(start) + 1));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    entries.emplace(key, std::move(e));
  }

  auto require = [&](const std::string& k) -> const Entry& {
    auto it = entries.find(k);
    if (it == entries.end()) throw SpecError("missing key '" + k + "'", 0, 0);
    return it->second;
  };
  auto single = [&](const Entry& e) -> const Token& {
    if (e.rows.size() != 1 || e.rows[0].size() != 1) throw SpecError("expected a single value", e.line, e.key_column);
    return e.rows[0][0];
  };

  const Entry& de = require("dim");
  const Int dim = parse_int(single(de), de.line);
  if (dim < 1) throw SpecError("dim must be positive", de.line, single(de).column);

  const Entry& ae = require("alphabet");
  if (ae.rows.size() != 1 || ae.rows[0].empty()) throw SpecError("alphabet must be one nonempty list", ae.line, ae.key_column);
  std::vector<std::string> alphabet;
  std::map<std::string, Letter> letter_of;
  for (const auto& t : ae.rows[0]) {
    if (letter_of.count(t.text)) throw SpecError("duplicate letter '" + t.text + "'", ae.line, t.column);
    letter_of[t.text] = static_cast<Letter>(alphabet.size());
    alphabet.push_back(t.text);
  }

  auto vectors = [&](const Entry& e) {
    std::vector<IVec> out;
    for (const auto& row : e.rows) {
      if (static_cast<Int>(row.size()) != dim) {
        const int col = row.empty() ? e.key_column : row[0].column;
        throw SpecError("expected " + std::to_string(dim) + " integers", e.line, col);
      }
      IVec v(dim);
      for (Int i = 0; i < dim; ++i) v(i) = parse_int(row[static_cast<std::size_t>(i)], e.line);
      out.push_back(v);
    }
    return out;
  };

  const Entry& le = require("L");
  const auto rows = vectors(le);
  if (static_cast<Int>(rows.size()) != dim) throw SpecError("L needs " + std::to_string(dim) + " rows", le.line, le.key_column);
  IMat L(dim, dim);
  for (Int i = 0; i < dim; ++i) L.row(i) = rows[static_cast<std::size_t>(i)].transpose();

  const Entry& se = require("support");
  const auto support = vectors(se);
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (support[i] == support[j]) throw SpecError("duplicate support vector", se.line, se.rows[i][0].column);

  std::vector<Word> rules(alphabet.size());
  for (const auto& [k, e] : entries) {
    if (k.rfind("rule.", 0) != 0) continue;
    const std::string name = k.substr(5);
    auto it = letter_of.find(name);
    if (it == letter_of.end()) throw SpecError("rule for unknown letter '" + name + "'", e.line, e.key_column);
    if (e.rows.size() != 1) throw SpecError("rule must be a single list", e.line, e.key_column);
    Word w;
    for (const auto& t : e.rows[0]) {
      auto jt = letter_of.find(t.text);
      if (jt == letter_of.end()) throw SpecError("unknown letter '" + t.text + "'", e.line, t.column);
      w.push_back(jt->second);
    }
    if (w.size() != support.size())
      throw SpecError("rule has " + std::to_string(w.size()) + " letters, support has " + std::to_string(support.size()),
                      e.line, e.key_column);
    rules[it->second] = w;
  }
  for (std::size_t a = 0; a < alphabet.size(); ++a)
    if (!entries.count("rule." + alphabet[a])) throw SpecError("missing rule for letter '" + alphabet[a] + "'", 0, 0);

  bool aperiodic = false;
  if (auto it = entries.find("declared_aperiodic"); it != entries.end()) {
    const Token& t = single(it->second);
    if (t.text == "true") aperiodic = true;
    else if (t.text != "false") throw SpecError("expected true or false", it->second.line, t.column);
  }

  try {
    Substitution z(alphabet, L, support, rules);
    z.declared_aperiodic = aperiodic;
    return z;
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what(), 0, 0);
  }
}

Substitution load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path, 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string serialize_spec(const Substitution& z) {
  std::ostringstream out;
  auto vec = [&](const IVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v(i);
  };
  out << "dim = " << z.dim() << "\nalphabet =";
  for (const auto& a : z.alphabet()) out << " " << a;
  out << "\nL = ";
  for (int i = 0; i < z.dim(); ++i) {
    if (i) out << " ; ";
    vec(z.L().row(i).transpose());
  }
  out << "\nsupport = ";
  for (std::size_t i = 0; i < z.support().size(); ++i) {
    if (i) out << " ; ";
    vec(z.support()[i]);
  }
  out << "\n";
  for (int a = 0; a < z.size(); ++a) {
    out << "rule." << z.name(static_cast<Letter>(a)) << " =";
    for (Letter b : z.rule(static_cast<Letter>(a))) out << " " << z.name(b);
    out << "\n";
  }
  out << "declared_aperiodic = " << (z.declared_aperiodic ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace cshape
