#include <random>
#include <string>

#include <gtest/gtest.h>

#include <prosogate/fs/feature_structure.hpp>
#include <prosogate/fs/json_io.hpp>

#include "support/subsumes.hpp"

namespace {

using prosogate::GrammarError;
using prosogate::fs::FeatureStructure;
using prosogate::fs::json;
using prosogate::fs::parse_avm;
using prosogate::fs::parse_avm_text;
using prosogate::fs::Path;
using prosogate::fs::Signature;
using prosogate::fs::to_json;
using prosogate::testing::subsumes;

FeatureStructure avm(std::string_view text) { return parse_avm_text(text); }

TEST(Unify, TopIsIdentity) {
  auto x = avm(R"({"HEAD": {"POS": "verb", "VFORM": "fin"}, "SUBCAT": ["#1", "#1"]})");
  auto u = prosogate::fs::unify(FeatureStructure::top(), x);
  ASSERT_TRUE(u);
  EXPECT_EQ(u->str(), x.str());
}

TEST(Unify, AtomClashFails) {
  EXPECT_FALSE(prosogate::fs::unify(avm(R"({"HEAD": {"POS": "verb"}})"), avm(R"({"HEAD": {"POS": "noun"}})")));
}

TEST(Unify, KindAndLengthMismatchFail) {
  EXPECT_FALSE(prosogate::fs::unify(avm(R"(["a"])"), avm(R"(["a", "b"])")));
  EXPECT_FALSE(prosogate::fs::unify(avm(R"([])"), avm(R"(["a"])")));
  EXPECT_FALSE(prosogate::fs::unify(avm(R"("a")"), avm(R"({"F": "a"})")));
  EXPECT_TRUE(prosogate::fs::unify(avm(R"(["a", "|", "#t"])"), avm(R"(["a", "b"])")));
}

TEST(Unify, HeadTraceSkeletonSharesLocWithDsl) {
  auto skeleton = avm(R"({"PHON": [], "LOC": "#1", "NONLOC": {"DSL": ["#1"]}})");
  auto local = avm(R"({"LOC": {"HEAD": {"POS": "verb"}, "SUBCAT": []}})");
  auto u = prosogate::fs::unify(skeleton, local);
  ASSERT_TRUE(u);
  EXPECT_TRUE(u->same_node(Path{"LOC"}, Path::parse("NONLOC.DSL.0")));
  EXPECT_TRUE(u->at("NONLOC.DSL.0.HEAD.POS")->atom_is("verb"));
  EXPECT_TRUE(u->at("PHON")->is_empty_list());
}

TEST(Unify, SubcatVariableIsBound) {
  auto a = avm(R"({"SUBCAT": [{"HEAD": {"POS": "noun", "CASE": "nom"}}, {"HEAD": {"POS": "noun", "CASE": "acc"}}]})");
  auto b = avm(R"({"SUBCAT": [{"HEAD": {"POS": "noun", "CASE": "nom"}}, "#x"], "BOUND": "#x"})");
  auto u = prosogate::fs::unify(a, b);
  ASSERT_TRUE(u);
  EXPECT_TRUE(u->at("BOUND.HEAD.CASE")->atom_is("acc"));
  EXPECT_TRUE(u->same_node(Path{"BOUND"}, Path::parse("SUBCAT.1")));
}

TEST(Unify, InputsAreNotMutated) {
  auto a = avm(R"({"F": "#1", "G": "#1"})");
  auto b = avm(R"({"F": {"H": "x"}})");
  const auto sa = a.str(), sb = b.str();
  ASSERT_TRUE(prosogate::fs::unify(a, b));
  EXPECT_EQ(a.str(), sa);
  EXPECT_EQ(b.str(), sb);
  EXPECT_TRUE(a.at("F")->is_top());
}

TEST(Unify, ReentrancyPropagatesConstraints) {
  auto a = avm(R"({"F": "#1", "G": "#1"})");
  auto b = avm(R"({"F": "x", "G": "y"})");
  EXPECT_FALSE(prosogate::fs::unify(a, b));
  auto c = prosogate::fs::unify(a, avm(R"({"F": "x"})"));
  ASSERT_TRUE(c);
  EXPECT_TRUE(c->at("G")->atom_is("x"));
}

TEST(Unify, CycleIsFailure) {
  auto a = avm(R"({"F": "#1", "G": {"#1": {}}, "H": "#1"})");
  auto b = avm(R"({"F": {"K": "#2"}, "G": "#2"})");  // would make G.K = G
  EXPECT_FALSE(prosogate::fs::unify(a, b));
}

TEST(Unify, UndeclaredAttributeIsFormatErrorNotFailure) {
  Signature sig({"HEAD", "POS"});
  auto a = avm(R"({"HEAD": {"POS": "verb"}})");
  auto b = avm(R"({"FOO": "x"})");
  EXPECT_THROW(prosogate::fs::unify(sig, a, b), GrammarError);
  EXPECT_FALSE(prosogate::fs::unify(sig, a, avm(R"({"HEAD": {"POS": "noun"}})")));
}

TEST(JsonIo, CyclicAndInconsistentInputsRejected) {
  EXPECT_THROW(avm(R"({"#1": {"F": "#1"}})"), GrammarError);
  EXPECT_THROW(avm(R"({"F": {"#1": "a"}, "G": {"#1": "b"}})"), GrammarError);
  Signature sig({"F"});
  try {
    parse_avm(json::parse(R"({"F": {"FOO": 1}})"), &sig);
    FAIL() << "expected GrammarError";
  } catch (const GrammarError& e) {
    EXPECT_NE(std::string(e.what()).find("FOO"), std::string::npos);
  }
}

TEST(JsonIo, TagsAndTailsRender) {
  auto a = avm(R"({"F": ["#1", "|", "#2"], "G": {"#1": "x"}, "H": "#2"})");
  auto j = to_json(a);
  auto back = parse_avm(j);
  EXPECT_EQ(back.str(), a.str());
  EXPECT_TRUE(back.same_node(Path::parse("F.REST"), Path{"H"}));
}

TEST(Builders, ListOfViewsKeepsIdentity) {
  auto a = avm(R"({"X": "#1", "Y": {"Z": "#1"}})");
  auto l = FeatureStructure::list({*a.at("X"), *a.at("Y")});
  EXPECT_TRUE(l.same_node(Path::parse("0"), Path::parse("1.Z")));
  auto r = a.replace(Path{"X"}, FeatureStructure::atom("q"));
  EXPECT_TRUE(r.at("X")->atom_is("q"));
  EXPECT_TRUE(r.at("Y.Z")->is_top());
}

// --- randomized algebraic properties --------------------------------------

class RandomAvm {
 public:
  explicit RandomAvm(unsigned seed) : rng_(seed) {}

  FeatureStructure next() {
    for (;;) {
      auto j = value(0);
      try {
        return parse_avm(j);
      } catch (const GrammarError&) {
        // random tags may close a cycle; draw again
      }
    }
  }

 private:
  json value(int depth) {
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 2 : 5);
    switch (pick(rng_)) {
      case 0:
        return atoms_[coin(3)];
      case 1:
        return "#" + std::to_string(coin(3));
      case 2:
        return json::object();
      case 3: {
        json arr = json::array();
        int n = coin(3);
        for (int i = 0; i < n; ++i) arr.push_back(value(depth + 1));
        return arr;
      }
      default: {
        json obj = json::object();
        for (const char* f : {"A", "B", "C"})
          if (coin(2)) obj[f] = value(depth + 1);
        if (coin(4) == 0) return json{{"#" + std::to_string(coin(3)), obj}};
        return obj;
      }
    }
  }
  int coin(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937 rng_;
  const char* atoms_[3] = {"x", "y", "z"};
};

TEST(UnifyProperties, CommutativeAssociativeIdempotentAndGreatestLowerBound) {
  RandomAvm gen(7);
  int successes = 0;
  for (int trial = 0; trial < 600; ++trial) {
    auto a = gen.next(), b = gen.next(), c = gen.next();
    auto ab = prosogate::fs::unify(a, b);
    auto ba = prosogate::fs::unify(b, a);
    ASSERT_EQ(ab.has_value(), ba.has_value());
    auto aa = prosogate::fs::unify(a, a);
    ASSERT_TRUE(aa);
    EXPECT_EQ(aa->str(), a.str());
    if (!ab) continue;
    ++successes;
    EXPECT_EQ(ab->str(), ba->str());
    EXPECT_TRUE(subsumes(a, *ab)) << a.str() << " / " << ab->str();
    EXPECT_TRUE(subsumes(b, *ab)) << b.str() << " / " << ab->str();
    auto left = prosogate::fs::unify(*ab, c);
    auto bc = prosogate::fs::unify(b, c);
    auto right = bc ? prosogate::fs::unify(a, *bc) : std::nullopt;
    ASSERT_EQ(left.has_value(), right.has_value()) << a.str() << " " << b.str() << " " << c.str();
    if (left) {
      EXPECT_EQ(left->str(), right->str());
    }
  }
  EXPECT_GT(successes, 50);
}

TEST(JsonIoProperties, RoundTripPreservesStructure) {
  RandomAvm gen(11);
  for (int i = 0; i < 300; ++i) {
    auto a = gen.next();
    EXPECT_EQ(parse_avm(to_json(a)).str(), a.str());
  }
}

}  // namespace
