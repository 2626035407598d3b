#include <gtest/gtest.h>

#include "common.hpp"

using namespace cshape;

namespace {

const std::string base =
    "dim = 1\n"
    "alphabet = a b\n"
    "L = 2\n"
    "support = 0 ; 1\n"
    "rule.a = a b\n"
    "rule.b = b a\n";

SpecError error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return SpecError("", 0, 0);
}

}  // namespace

TEST(SpecFile, ParsesMinimalFile) {
  const auto z = parse_spec("# comment\n" + base);
  EXPECT_EQ(z.dim(), 1);
  EXPECT_EQ(z.size(), 2);
  EXPECT_EQ(z.rule(0), (Word{0, 1}));
  EXPECT_FALSE(z.declared_aperiodic);
}

TEST(SpecFile, RoundTripEveryExample) {
  for (const auto& name : cshape::test::example_names()) {
    const auto z = cshape::test::example(name);
    const std::string text = serialize_spec(z);
    const auto back = parse_spec(text);
    EXPECT_EQ(back.alphabet(), z.alphabet()) << name;
    EXPECT_EQ(back.L(), z.L()) << name;
    EXPECT_EQ(back.support(), z.support()) << name;
    EXPECT_EQ(back.rules(), z.rules()) << name;
    EXPECT_EQ(back.declared_aperiodic, z.declared_aperiodic) << name;
    EXPECT_EQ(serialize_spec(back), text) << name;
  }
}

TEST(SpecFile, ReportsLineAndColumn) {
  auto e = error_of(base + "rule.c = a a\n");
  EXPECT_EQ(e.line(), 7);
  e = error_of("dim = 1\nalphabet = a b\nL = 2x\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 5);
  EXPECT_NE(std::string(e.what()).find("3:5:"), std::string::npos);
  e = error_of(base + "dim = 1\n");
  EXPECT_EQ(e.line(), 7);
  e = error_of(base + "colour = red\n");
  EXPECT_EQ(e.line(), 7);
  e = error_of("dim = 1\nno equals sign\n");
  EXPECT_EQ(e.line(), 2);
}

TEST(SpecFile, RejectsInconsistentContent) {
  error_of("dim = 1\nalphabet = a a\nL = 2\nsupport = 0 ; 1\nrule.a = a a\n");
  error_of("dim = 1\nalphabet = a b\nL = 2\nsupport = 0 ; 0\nrule.a = a b\nrule.b = b a\n");
  error_of("dim = 2\nalphabet = a b\nL = 2\nsupport = 0 ; 1\nrule.a = a b\nrule.b = b a\n");
  error_of("dim = 1\nalphabet = a b\nL = 2\nsupport = 0 ; 1\nrule.a = a b a\nrule.b = b a\n");
  error_of("dim = 1\nalphabet = a b\nL = 2\nsupport = 0 ; 1\nrule.a = a z\nrule.b = b a\n");
  error_of("dim = 1\nalphabet = a b\nL = 2\nsupport = 0 ; 1\nrule.a = a b\n");
  error_of("dim = 1\nalphabet = a b\nL = 2\nsupport = 0 ; 2\nrule.a = a b\nrule.b = b a\n");
  error_of(base + "declared_aperiodic = maybe\n");
  const auto e = error_of("dim = 1\nalphabet = a b\nL = 1\nsupport = 0\nrule.a = a\nrule.b = b\n");
  EXPECT_EQ(e.line(), 0);
}

TEST(SpecFile, MissingFile) { EXPECT_THROW(load_spec("/nonexistent/file.sub"), SpecError); }
