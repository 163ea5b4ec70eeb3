#include "sgc/embedding.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "sgc/error.hpp"

namespace sgc {
namespace {

SceneGraph single(const std::string& cls, std::vector<std::string> attrs = {}) {
  GraphBuilder b;
  b.add_object(cls, attrs);
  return b.build();
}

SceneGraph labels(std::vector<std::string> classes) {
  GraphBuilder b;
  for (const auto& c : classes) b.add_object(c);
  return b.build();
}

double object_cosine(const SceneGraph& a, const SceneGraph& b) {
  HashedContextProvider p;
  return cosine(p.embed_objects(a)[0], p.embed_objects(b)[0]);
}

TEST(EmbeddingTest, CosineBasics) {
  EmbeddingVector v({0.3, -1.2, 4.0});
  EXPECT_EQ(cosine(v, v), 1.0);
  EXPECT_EQ(cosine(EmbeddingVector({1, 0}), EmbeddingVector({0, 1})), 0.0);
  EXPECT_EQ(cosine(EmbeddingVector({1, 2}), EmbeddingVector({-1, -2})), -1.0);
  EXPECT_EQ(cosine(EmbeddingVector({1, 2}), EmbeddingVector({3, 5})),
            cosine(EmbeddingVector({3, 5}), EmbeddingVector({1, 2})));
}

TEST(EmbeddingTest, CosineErrors) {
  try {
    cosine(EmbeddingVector({0, 0}), EmbeddingVector({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateVector);
  }
  EXPECT_THROW(cosine(EmbeddingVector({1}), EmbeddingVector({1, 0})), Error);
}

TEST(EmbeddingTest, HashedFeatureShape) {
  auto f = hashed_feature("attr:red", 256);
  ASSERT_EQ(f.dimension(), 256u);
  for (double x : f.values()) EXPECT_EQ(std::abs(x), 1.0 / 16.0);
  EXPECT_NEAR(f.norm(), 1.0, 1e-12);
  EXPECT_EQ(f, hashed_feature("attr:red", 256));
}

TEST(EmbeddingTest, RegressionConstants) {
  double same_class = object_cosine(single("woman", {"elderly"}), single("woman", {"smiling"}));
  double other_class = object_cosine(single("woman", {"elderly"}), single("kitchen"));
  EXPECT_DOUBLE_EQ(same_class, 0.79194255135568248);
  EXPECT_DOUBLE_EQ(other_class, 0.030578727453452092);
  EXPECT_GT(same_class, other_class);
  double dog_car = object_cosine(single("dog"), single("car"));
  EXPECT_DOUBLE_EQ(dog_car, -0.02325606550774784);
  EXPECT_LT(dog_car, 0.9);
}

TEST(EmbeddingTest, GraphCosineRegression) {
  HashedContextProvider p;
  auto a = labels({"man", "horse", "hat", "beach"});
  auto b = labels({"man", "horse", "hat", "dog"});
  auto c = labels({"kitchen", "pot", "stove", "onion"});
  double ab = cosine(embed_graph(a, p), embed_graph(b, p));
  double ac = cosine(embed_graph(a, p), embed_graph(c, p));
  EXPECT_DOUBLE_EQ(ab, 0.74158903579833912);
  EXPECT_DOUBLE_EQ(ac, 0.064177525999434021);
  EXPECT_GT(ab, ac);
  EXPECT_EQ(cosine(embed_graph(a, p), embed_graph(a, p)), 1.0);
}

TEST(EmbeddingTest, IdenticalContextGivesIdenticalVectors) {
  GraphBuilder b;
  auto m1 = b.add_object("man", {"tall"});
  auto h1 = b.add_object("horse");
  auto m2 = b.add_object("man", {"tall"});
  auto h2 = b.add_object("horse");
  b.add_edge(m1, "ride", h1);
  b.add_edge(m2, "ride", h2);
  auto g = b.build();
  auto v = HashedContextProvider().embed_objects(g);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], v[1]);
  EXPECT_EQ(v[2], v[3]);
}

TEST(EmbeddingTest, ContextChangesVector) {
  GraphBuilder b;
  auto m = b.add_object("man");
  b.add_edge(m, "ride", b.add_object("horse"));
  auto v = HashedContextProvider().embed_objects(b.build());
  auto bare = HashedContextProvider().embed_objects(single("man"));
  EXPECT_FALSE(v[1] == bare[0]);
  EXPECT_GT(cosine(v[1], bare[0]), 0.9);
}

TEST(EmbeddingTest, EmptyGraph) {
  EXPECT_TRUE(HashedContextProvider().embed_objects(SceneGraph{}).empty());
  try {
    embed_graph(SceneGraph{}, HashedContextProvider());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGraph);
  }
}

TEST(EmbeddingTest, SingleObjectGraphEmbedsAsObject) {
  HashedContextProvider p;
  auto g = single("woman", {"elderly"});
  EXPECT_NEAR(cosine(embed_graph(g, p), p.embed_objects(g)[0]), 1.0, 1e-12);
}

TEST(FileBackedProviderTest, LooksUpBySignature) {
  auto j = nlohmann::json::parse(R"({"dimension":2,"vectors":{"ball|red|2":[1,0],"dog||2":[0,1]}})");
  auto p = FileBackedProvider::from_json(j);
  GraphBuilder b;
  b.add_object("ball", {"red"});
  b.add_object("dog");
  auto v = p.embed_objects(b.build());
  EXPECT_EQ(v[0], EmbeddingVector({1, 0}));
  EXPECT_EQ(v[1], EmbeddingVector({0, 1}));
  EXPECT_EQ(object_signature(make_object(NodeId{0}, "ball", {"red", "big"}), 2), "ball|big,red|2");
}

TEST(FileBackedProviderTest, MissingEntryNamesObject) {
  auto p = FileBackedProvider::from_json(nlohmann::json::parse(R"({"dog||2":[0,1]})"));
  try {
    p.embed_objects(single("cat"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingEmbedding);
    EXPECT_NE(std::string(e.what()).find("cat"), std::string::npos);
  }
}

TEST(FileBackedProviderTest, RejectsRaggedTable) {
  EXPECT_THROW(FileBackedProvider::from_json(nlohmann::json::parse(R"({"a||2":[0,1],"b||2":[1]})")), Error);
  EXPECT_THROW(FileBackedProvider::from_json(nlohmann::json::parse(R"({})")), Error);
}

}  // namespace
}  // namespace sgc
