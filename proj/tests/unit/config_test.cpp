#include <gtest/gtest.h>

#include "prenelab/cli/schemas.hpp"
#include "prenelab/core/rng.hpp"

using namespace prenelab;
using namespace prenelab::cli;

namespace {

const Schema& test_schema() {
  static const Schema s{
      "test",
      {
          {"count", ValueType::Int, std::int64_t{-1}, -10.0, 10.0, {}},
          {"n", ValueType::UInt, std::uint64_t{3}, {}, 100.0, {}},
          {"rate", ValueType::Real, 0.25, 0.0, 1.0, {}},
          {"g", ValueType::Rational, Rational(1, 2), 0.0, 1.0, {}},
          {"name", ValueType::String, std::string("plain"), {}, {}, {}},
          {"mode", ValueType::String, std::string("fast"), {}, {}, {"fast", "slow"}},
          {"gs", ValueType::RationalList, std::vector<Rational>{}, 0.0, 1.0, {}},
          {"words", ValueType::StringList, std::vector<std::string>{"x"}, {}, {}, {}},
      },
  };
  return s;
}

ConfigError expect_error(std::string_view text, const Schema& schema = test_schema()) {
  try {
    (void)parse_config(text, schema);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return ConfigError(ConfigErrorKind::Syntax, 0, "", "");
}

std::string random_text(Rng& rng, std::size_t max_len, bool lists) {
  static const std::string pool = "abcXYZ019 _-=#,\"\\\t/\xc3\xa9";
  std::string s;
  const auto n = uniform_below(rng, max_len + 1);
  while (s.size() < n) {
    const auto i = uniform_below(rng, pool.size());
    if (pool[i] == '\xc3') {
      s += "\xc3\xa9";
    } else if (pool[i] != '\xa9') {
      s += pool[i];
    }
  }
  if (lists && s.empty()) s = "e";
  return s;
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(parse_config("", test_schema()), RunConfig(test_schema()));
  EXPECT_EQ(parse_config("\n  # only comments\n\n", test_schema()), RunConfig(test_schema()));
  for (const Schema* s : all_schemas()) EXPECT_EQ(parse_config("", *s), RunConfig(*s)) << s->command;
}

TEST(Config, TypedValues) {
  const auto c = parse_config(
      "count = -7\n"
      "n=42   # trailing\n"
      "rate = 1e-1\n"
      "g = 1/3\n"
      "name = \"a # b, \\\"c\\\"\" # real comment\n"
      "mode = slow\n"
      "gs = 0, 1/2, 0.25, 1\n"
      "words = alpha, \"be,ta\" , gamma\r\n",
      test_schema());
  EXPECT_EQ(c.get<std::int64_t>("count"), -7);
  EXPECT_EQ(c.get<std::uint64_t>("n"), 42u);
  EXPECT_DOUBLE_EQ(c.get<double>("rate"), 0.1);
  EXPECT_EQ(c.get<Rational>("g"), Rational(1, 3));
  EXPECT_EQ(c.get<std::string>("name"), "a # b, \"c\"");
  EXPECT_EQ(c.get<std::string>("mode"), "slow");
  EXPECT_EQ(c.get<std::vector<Rational>>("gs"),
            (std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1, 4), Rational(1)}));
  EXPECT_EQ(c.get<std::vector<std::string>>("words"), (std::vector<std::string>{"alpha", "be,ta", "gamma"}));
}

TEST(Config, RationalsStayExact) {
  const auto c = parse_config("g = 1/2\n", lifespan_growth_schema());
  EXPECT_EQ(c.get<std::vector<Rational>>("g"), std::vector<Rational>{Rational(1, 2)});
  const auto d = parse_config("g = 0.05", test_schema());
  EXPECT_EQ(d.get<Rational>("g"), Rational(1, 20));
}

TEST(Config, ErrorsNameLineAndKey) {
  struct Case {
    std::string text;
    ConfigErrorKind kind;
    std::size_t line;
    std::string key;
  };
  const std::vector<Case> cases{
      {"n = 1\nno equals sign", ConfigErrorKind::Syntax, 2, ""},
      {"\nname = \"open", ConfigErrorKind::Syntax, 2, ""},
      {"Bad-Key = 1", ConfigErrorKind::Syntax, 1, "Bad-Key"},
      {"= 1", ConfigErrorKind::Syntax, 1, ""},
      {"n = 1\n\nhorizon = 4", ConfigErrorKind::UnknownKey, 3, "horizon"},
      {"n = 1\nn = 2", ConfigErrorKind::DuplicateKey, 2, "n"},
      {"n = -1", ConfigErrorKind::TypeMismatch, 1, "n"},
      {"n = +1", ConfigErrorKind::TypeMismatch, 1, "n"},
      {"count = 1.5", ConfigErrorKind::TypeMismatch, 1, "count"},
      {"rate = nan", ConfigErrorKind::TypeMismatch, 1, "rate"},
      {"rate = inf", ConfigErrorKind::TypeMismatch, 1, "rate"},
      {"g = 1/0", ConfigErrorKind::TypeMismatch, 1, "g"},
      {"gs = 1/2,,1", ConfigErrorKind::TypeMismatch, 1, "gs"},
      {"words = a, \"\"", ConfigErrorKind::TypeMismatch, 1, "words"},
      {"name = a\"b\"", ConfigErrorKind::TypeMismatch, 1, "name"},
      {"n = 101", ConfigErrorKind::RangeViolation, 1, "n"},
      {"count = -11", ConfigErrorKind::RangeViolation, 1, "count"},
      {"rate = 1.5", ConfigErrorKind::RangeViolation, 1, "rate"},
      {"g = 3/2", ConfigErrorKind::RangeViolation, 1, "g"},
      {"gs = 1/2, 2", ConfigErrorKind::RangeViolation, 1, "gs"},
      {"mode = medium", ConfigErrorKind::RangeViolation, 1, "mode"},
      {std::string("n = 1\0", 6), ConfigErrorKind::Syntax, 1, ""},
      {"name = \xff", ConfigErrorKind::Syntax, 1, ""},
  };
  for (const auto& c : cases) {
    const auto e = expect_error(c.text);
    EXPECT_EQ(e.kind(), c.kind) << c.text;
    EXPECT_EQ(e.line(), c.line) << c.text;
    EXPECT_EQ(e.key(), c.key) << c.text;
    EXPECT_EQ(e.code(), Errc::InvalidConfig);
    const std::string what = e.what();
    EXPECT_NE(what.find("line " + std::to_string(c.line)), std::string::npos) << what;
    if (!c.key.empty()) {
      EXPECT_NE(what.find("'" + c.key + "'"), std::string::npos) << what;
    }
  }
}

TEST(Config, SerializeRoundTripsDefaults) {
  for (const Schema* s : all_schemas()) {
    const RunConfig defaults(*s);
    EXPECT_EQ(parse_config(serialize_config(defaults), *s), defaults) << s->command;
  }
}

TEST(Config, SerializeRoundTripsRandomValues) {
  Rng rng(77);
  const Schema& s = test_schema();
  for (int trial = 0; trial < 2000; ++trial) {
    RunConfig c(s);
    c.set("count", static_cast<std::int64_t>(uniform_below(rng, 21)) - 10);
    c.set("n", uniform_below(rng, 101));
    c.set("rate", uniform01(rng));
    c.set("g", Rational(static_cast<long long>(uniform_below(rng, 1000)), 1000 + static_cast<long long>(uniform_below(rng, 7))));
    c.set("name", random_text(rng, 12, false));
    std::vector<Rational> gs(uniform_below(rng, 4));
    for (auto& g : gs) g = Rational(static_cast<long long>(uniform_below(rng, 9)), 8);
    c.set("gs", gs);
    std::vector<std::string> words(uniform_below(rng, 4));
    for (auto& w : words) w = random_text(rng, 8, true);
    c.set("words", words);
    const auto text = serialize_config(c);
    RunConfig back(s);
    ASSERT_NO_THROW(back = parse_config(text, s)) << text;
    ASSERT_EQ(back, c) << text;
    ASSERT_EQ(serialize_config(back), text);
  }
}

TEST(Config, RandomBytesOnlyRaiseConfigError) {
  Rng rng(4242);
  const std::string seeds[] = {"n = 5\n", "g = 1/2\n", "words = a, \"b\"\n", "name = \"q\\\"\"\n", "# c\n"};
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    const auto pieces = uniform_below(rng, 4);
    for (std::uint64_t i = 0; i < pieces; ++i) text += seeds[uniform_below(rng, std::size(seeds))];
    const auto noise = uniform_below(rng, 24);
    for (std::uint64_t i = 0; i < noise; ++i) {
      const auto at = text.empty() ? 0 : uniform_below(rng, text.size() + 1);
      text.insert(text.begin() + static_cast<std::ptrdiff_t>(at), static_cast<char>(uniform_below(rng, 256)));
    }
    try {
      (void)parse_config(text, test_schema());
    } catch (const ConfigError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected " << e.what();
    }
  }
}
