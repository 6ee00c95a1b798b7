#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "prenelab/core/rng.hpp"
#include "prenelab/registry/jsonl.hpp"
#include "prenelab/registry/shared.hpp"
#include "registry_oracle.hpp"

using namespace prenelab;
using namespace prenelab::registry;
using namespace prenelab::oracle;

TEST(Normalize, DocumentsFoldCaseAndWhitespace) {
  EXPECT_EQ(normalize("  Hello \t\n World  ", Substrate::document()), "hello world");
  EXPECT_EQ(normalize("  Hello ", Substrate::computer()), "  Hello ");
  EXPECT_EQ(normalize("", Substrate::document()), "");
}

TEST(Substrate, TextRoundTrip) {
  for (const auto& s : {Substrate::nucleic_acid(), Substrate::brain(), Substrate::computer(), Substrate::document(),
                        Substrate::other("clay tablet")}) {
    EXPECT_EQ(parse_substrate(to_string(s)), s);
  }
  EXPECT_FALSE(parse_substrate("other:").has_value());
  EXPECT_FALSE(parse_substrate("dna").has_value());
}

TEST(World, EmptyWorldHasNoCopies) {
  World w;
  const Prene p("x", "anything");
  EXPECT_EQ(w.copy_number(p, 0), 0u);
  EXPECT_TRUE(w.extinct(p, 0));
  EXPECT_EQ(w.classify(p, 0), (Classification{false, false, false, true}));
  EXPECT_THROW((void)w.copy_number(p, 1), Error);
}

TEST(World, SingleDocumentCopy) {
  World w;
  w.create(Substrate::document(), "To Be  or not");
  const auto p = Prene::of("hamlet", "to be or NOT", Substrate::document());
  EXPECT_EQ(w.copy_number(p, 0), 0u);
  EXPECT_EQ(w.copy_number(p, 1), 1u);
  EXPECT_FALSE(w.extinct(p, 1));
}

TEST(World, SmallpoxIsAGeneAndATurene) {
  World w;
  const ObjectId virus = w.create(Substrate::nucleic_acid(), "ATGAGTACGTTC");
  w.transcribe(virus, Substrate::computer());
  const auto p = Prene::of("variola", "ATGAGTACGTTC", Substrate::nucleic_acid());
  EXPECT_EQ(w.classify(p, w.now()), (Classification{true, false, true, false}));
  w.destroy(virus);
  EXPECT_EQ(w.classify(p, w.now()), (Classification{false, false, true, false}));
  EXPECT_EQ(w.classify(p, 1), (Classification{true, false, false, false}));
}

TEST(World, InvalidEventsRejectedAtomically) {
  World w;
  const ObjectId a = w.create(Substrate::computer(), "abc");
  const auto before = w.log();
  auto expect_invalid = [&](Event e) {
    try {
      w.append(std::move(e));
      FAIL();
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), Errc::InvalidEvent);
    }
    EXPECT_EQ(w.log(), before);
  };
  expect_invalid(Event{5, EventKind::Destroy, a, {}, {}, {}});
  expect_invalid(Event{1, EventKind::Create, a, Substrate::computer(), "x", {}});
  expect_invalid(Event{1, EventKind::Create, 9, Substrate::computer(), "x", ObjectId{42}});
  expect_invalid(Event{1, EventKind::Transcribe, 9, Substrate::computer(), {}, a});
  expect_invalid(Event{1, EventKind::Transcribe, 9, Substrate::brain(), "other", a});
  expect_invalid(Event{1, EventKind::Destroy, 77, {}, {}, {}});
  w.destroy(a);
  EXPECT_THROW(w.destroy(a), Error);
}

TEST(World, RandomLogsMatchBruteForce) {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto log = random_log(rng, 50, false);
    const World w = World::replay(log);
    std::set<std::string> patterns;
    for (const auto& o : w.objects()) patterns.insert(normalize(o.content, o.substrate));
    patterns.insert("never stored");
    for (const auto& pattern : patterns) {
      const Prene p("p", pattern);
      for (EventIndex t = 0; t <= w.now(); ++t) {
        const auto n = brute_count(log, t, pattern);
        ASSERT_EQ(w.copy_number(p, t), n);
        ASSERT_EQ(w.extinct(p, t), n == 0);
        const auto c = w.classify(p, t);
        ASSERT_EQ(c.gene, brute_count(log, t, pattern, SubstrateKind::NucleicAcid) > 0);
        ASSERT_EQ(c.meme, brute_count(log, t, pattern, SubstrateKind::Brain) > 0);
        ASSERT_EQ(c.turene, brute_count(log, t, pattern, SubstrateKind::Computer) > 0);
      }
    }
  }
}

TEST(World, FaithfulLogsNeverRecover) {
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    const auto log = random_log(rng, 50, true);
    ASSERT_TRUE(is_faithful(log));
    const World w = World::replay(log);
    std::set<std::string> patterns;
    for (const auto& o : w.objects()) patterns.insert(o.content);
    for (const auto& pattern : patterns) {
      const Prene p("p", pattern);
      bool seen = false;
      bool gone = false;
      for (EventIndex t = 0; t <= w.now(); ++t) {
        const bool extinct = w.extinct(p, t);
        if (!extinct) seen = true;
        if (seen && extinct) gone = true;
        if (gone) {
          ASSERT_TRUE(extinct) << "recovered at t=" << t;
        }
      }
    }
  }
}

TEST(World, FaithfulnessDetectsMutationAndLateGenesis) {
  World w;
  const auto a = w.create(Substrate::computer(), "abc");
  w.create(Substrate::computer(), "abc", a);
  EXPECT_TRUE(is_faithful(w.log()));
  World mutated = World::replay(w.log());
  mutated.create(Substrate::computer(), "abd", a);
  EXPECT_FALSE(is_faithful(mutated.log()));
  World late = World::replay(w.log());
  late.create(Substrate::computer(), "new");
  EXPECT_FALSE(is_faithful(late.log()));
  World unnormalized;
  unnormalized.create(Substrate::document(), "Capital");
  EXPECT_FALSE(is_faithful(unnormalized.log()));
  EXPECT_TRUE(is_faithful(std::vector<Event>{}));
}

TEST(Lineage, GenesisChainAndBruteForce) {
  World w;
  const auto a = w.create(Substrate::nucleic_acid(), "x");
  const Prene p("p", "x");
  EXPECT_EQ(w.lineage(p), (Lineage{{a}, {}}));
  const auto b = w.transcribe(a, Substrate::computer());
  const auto c = w.transcribe(b, Substrate::brain());
  const auto d = w.transcribe(c, Substrate::computer());
  const auto l = w.lineage(p);
  EXPECT_EQ(l.nodes, (std::vector<ObjectId>{a, b, c, d}));
  EXPECT_EQ(l.edges.size(), 3u);

  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto log = random_log(rng, 40, false);
    const World rw = World::replay(log);
    for (const auto& o : rw.objects()) {
      const Prene q("q", normalize(o.content, o.substrate));
      Lineage expected;
      std::set<ObjectId> members;
      for (const auto& x : rw.objects()) {
        if (q.accepts(x)) {
          expected.nodes.push_back(x.id);
          members.insert(x.id);
        }
      }
      for (const auto& x : rw.objects()) {
        if (x.source && members.contains(x.id) && members.contains(*x.source)) expected.edges.emplace_back(*x.source, x.id);
      }
      std::sort(expected.nodes.begin(), expected.nodes.end());
      ASSERT_EQ(rw.lineage(q), expected);
    }
  }
}

TEST(Replay, DeterministicAndSerializedIdentically) {
  Rng rng(5);
  const auto log = random_log(rng, 60, false);
  const World a = World::replay(log);
  const World b = World::replay(log);
  EXPECT_EQ(a.objects(), b.objects());
  EXPECT_EQ(to_jsonl(a.log()), to_jsonl(b.log()));
  EXPECT_EQ(parse_jsonl(to_jsonl(log)), log);
}

TEST(Jsonl, GoldenLog) {
  World w;
  const auto virus = w.create(Substrate::nucleic_acid(), "ATGAGTACGTTC");
  const auto file = w.transcribe(virus, Substrate::computer());
  w.create(Substrate::document(), "Smallpox\tgenome, v1", file);
  w.destroy(virus);
  std::ifstream in(std::string(PRENELAB_GOLDEN_DIR) + "/smallpox_log.jsonl", std::ios::binary);
  ASSERT_TRUE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(to_jsonl(w.log()), golden.str());
  EXPECT_EQ(World::replay(parse_jsonl(golden.str())).objects(), w.objects());
}

TEST(Jsonl, MalformedLinesNameTheLine) {
  for (const std::string& bad : {
           std::string("{\"i\":0}\n{"),
           std::string("\n[1,2]"),
           std::string("{\"i\":0,\"kind\":\"melt\",\"obj\":1}"),
           std::string("{\"i\":0,\"kind\":\"create\",\"obj\":1,\"substrate\":\"computer\",\"content_b64\":\"@@\"}"),
           std::string("{\"i\":0,\"kind\":\"create\",\"obj\":1,\"extra\":true}"),
           std::string("{\"i\":-1,\"kind\":\"destroy\",\"obj\":1}"),
       }) {
    try {
      (void)parse_jsonl(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Parse);
      EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
    }
  }
  EXPECT_TRUE(parse_jsonl("\n\n").empty());
}

TEST(LongestShared, Examples) {
  const std::vector<std::string> same{"GATTACA", "GATTACA"};
  EXPECT_EQ(longest_shared(same), "GATTACA");
  const std::vector<std::string> three{"GATTACA", "TTAC", "ATTACG"};
  EXPECT_EQ(longest_shared(three), "TTAC");
  const std::vector<std::string> disjoint{"GATTACA", "TTAC", "ATTACG", "xyz"};
  EXPECT_EQ(longest_shared(disjoint), "");
  const std::vector<std::string> tie{"abXcd", "cdYab"};
  EXPECT_EQ(longest_shared(tie), "ab");
  EXPECT_THROW(longest_shared(std::vector<std::string>{}), Error);
}

TEST(LongestShared, MatchesBruteForce) {
  Rng rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> xs(1 + uniform_below(rng, 4));
    const std::string alphabet = uniform_below(rng, 2) ? "ab" : "ACGU";
    for (auto& x : xs) x = random_content(rng, alphabet, 64);
    ASSERT_EQ(longest_shared(xs), brute_longest_shared(xs)) << trial;
  }
}

TEST(SharedPrenes, AllCommonSubstrings) {
  const std::vector<std::string> xs{"abcab", "cabd"};
  std::set<std::string> expected;
  for (std::size_t i = 0; i < xs[0].size(); ++i) {
    for (std::size_t len = 1; i + len <= xs[0].size(); ++len) {
      const auto sub = xs[0].substr(i, len);
      if (xs[1].find(sub) != std::string::npos) expected.insert(sub);
    }
  }
  EXPECT_EQ(shared_prenes(xs), expected);
  std::set<std::string> long_ones;
  for (const auto& s : expected) {
    if (s.size() >= 2) long_ones.insert(s);
  }
  EXPECT_EQ(shared_prenes(xs, 2), long_ones);
}
