#include "sgc/g2t.hpp"

#include <random>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "sgc/error.hpp"

namespace sgc {
namespace {

SceneGraph elderly_woman() {
  GraphBuilder b;
  auto w = b.add_object("woman", {"elderly"});
  b.add_edge(w, "cook in", b.add_object("kitchen"));
  return b.build();
}

std::vector<std::string> texts(const GraphEncoderInput& in) {
  std::vector<std::string> out;
  for (const auto& t : in.tokens) out.push_back(t.text);
  return out;
}

std::size_t position(const GraphEncoderInput& in, const std::string& text) {
  for (std::size_t i = 0; i < in.tokens.size(); ++i) {
    if (in.tokens[i].text == text) return i;
  }
  return in.tokens.size();
}

TEST(LinearizeTest, TokensInCanonicalOrder) {
  auto in = linearize(elderly_woman());
  EXPECT_EQ(texts(in), (std::vector<std::string>{"kitchen", "woman", "elderly", "cook in", "<global>"}));
  EXPECT_EQ(in.tokens[2].role, TokenRole::kAttribute);
  EXPECT_EQ(in.tokens[2].owner, 1u);
  EXPECT_EQ(in.tokens[3].role, TokenRole::kRelation);
  EXPECT_EQ(in.tokens[4].role, TokenRole::kGlobal);
}

TEST(LinearizeTest, EdgeRestrictedMask) {
  auto in = linearize(elderly_woman());
  const auto& m = in.mask;
  auto woman = position(in, "woman"), elderly = position(in, "elderly"), cook = position(in, "cook in"),
       kitchen = position(in, "kitchen"), global = position(in, "<global>");
  EXPECT_TRUE(m.allowed(woman, elderly));
  EXPECT_TRUE(m.allowed(woman, cook));
  EXPECT_TRUE(m.allowed(cook, kitchen));
  EXPECT_TRUE(m.allowed(woman, kitchen));
  EXPECT_FALSE(m.allowed(elderly, kitchen));
  EXPECT_FALSE(m.allowed(elderly, cook));
  for (std::size_t i = 0; i < in.tokens.size(); ++i) {
    EXPECT_TRUE(m.allowed(i, global));
    EXPECT_TRUE(m.allowed(global, i));
  }
}

TEST(LinearizeTest, MaskPolicies) {
  auto g = elderly_woman();
  auto relaxed = linearize(g, MaskPolicy::kAttributesSeeRelations);
  EXPECT_TRUE(relaxed.mask.allowed(position(relaxed, "elderly"), position(relaxed, "cook in")));
  EXPECT_FALSE(relaxed.mask.allowed(position(relaxed, "elderly"), position(relaxed, "kitchen")));
  auto full = linearize(g, MaskPolicy::kFull);
  for (std::size_t i = 0; i < full.tokens.size(); ++i) {
    for (std::size_t j = 0; j < full.tokens.size(); ++j) EXPECT_TRUE(full.mask.allowed(i, j));
  }
}

TEST(LinearizeTest, EmptyGraph) {
  auto in = linearize(SceneGraph{});
  ASSERT_EQ(in.tokens.size(), 1u);
  EXPECT_EQ(in.tokens[0].text, kGlobalToken);
  EXPECT_TRUE(in.mask.allowed(0, 0));
}

TEST(LinearizeTest, DisconnectedNodesOnlyMeetThroughGlobal) {
  GraphBuilder b;
  b.add_object("dog", {"black"});
  b.add_object("cat");
  auto in = linearize(b.build());
  auto cat = position(in, "cat"), dog = position(in, "dog"), black = position(in, "black");
  EXPECT_FALSE(in.mask.allowed(cat, dog));
  EXPECT_FALSE(in.mask.allowed(cat, black));
}

TEST(LinearizeTest, Deterministic) {
  auto g = testing::demo12_graphs();
  auto a = linearize(g[4]);
  auto b = linearize(canonicalize(g[4]));
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.mask, b.mask);
}

TEST(AttentionMaskTest, Base64MsbFirst) {
  AttentionMask m(3);
  m.allow(0, 0);  // bit 0 -> 0x80
  m.allow(2, 2);  // bit 8 -> second byte 0x80
  EXPECT_EQ(m.to_base64(), "gIA=");
}

TEST(RealizeTest, Golden) {
  EXPECT_EQ(realize_template(elderly_woman()), "an elderly woman cooks in a kitchen");
  EXPECT_EQ(realize_template(SceneGraph{}), "");
  GraphBuilder dog;
  dog.add_object("dog");
  EXPECT_EQ(realize_template(dog.build()), "there is a dog");
}

TEST(RealizeTest, CoordinationAndComponentOrder) {
  GraphBuilder b;
  auto man = b.add_object("man", {}, 2);
  b.add_edge(man, "ride", b.add_object("horse"));
  b.add_edge(man, "hold", b.add_object("whip"));
  b.add_edge(b.add_object("dog"), "near", b.add_object("tree"));
  EXPECT_EQ(realize_template(b.build()), "a man holds a whip and rides a horse. a dog is near a tree");
}

TEST(RealizeTest, RoundTripPreservesClasses) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::random_expressible_graph(rng);
    auto text = realize_template(g);
    auto back = ir_to_graph(parse_caption(text));
    EXPECT_EQ(testing::class_multiset(back), testing::class_multiset(g)) << text;
  }
}

TEST(DecoderRequestTest, Presets) {
  auto in = linearize(elderly_woman());
  auto j = export_decoder_request(in, DecodeParams::short_caption());
  EXPECT_EQ(j["schema"], "g2t-request/v1");
  EXPECT_EQ(j["params"]["beams"], 5);
  EXPECT_EQ(j["params"]["max_len"], 32);
  EXPECT_EQ(j["params"]["length_penalty"], 0.6);
  EXPECT_EQ(j["params"]["repetition_penalty"], 1.0);
  EXPECT_EQ(j["tokens"].size(), 5u);
  EXPECT_EQ(j["mask"]["dim"], 5);
  EXPECT_EQ(j["mask"]["data"], in.mask.to_base64());
  auto p = export_decoder_request(in, DecodeParams::paragraph());
  EXPECT_EQ(p["params"]["beams"], 3);
  EXPECT_EQ(p["params"]["max_len"], 400);
  EXPECT_EQ(p["params"]["repetition_penalty"], 3.0);
}

TEST(DecoderRequestTest, EmptyGraphRequest) {
  auto j = export_decoder_request(linearize(SceneGraph{}), DecodeParams{});
  EXPECT_EQ(j["tokens"].size(), 1u);
  EXPECT_EQ(j["mask"]["dim"], 1);
  EXPECT_EQ(j["mask"]["data"], "gA==");
}

TEST(DecoderRequestTest, RejectsOutOfRangeParams) {
  auto in = linearize(elderly_woman());
  for (DecodeParams bad : {DecodeParams{0, 32, 0.6, 1.0}, DecodeParams{5, 0, 0.6, 1.0}, DecodeParams{5, 32, -1, 1.0},
                           DecodeParams{5, 32, 0.6, 0.5}, DecodeParams{65, 32, 0.6, 1.0}}) {
    try {
      export_decoder_request(in, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kValidation);
    }
  }
}

}  // namespace
}  // namespace sgc
