#include <gtest/gtest.h>

#include "test_trees.hpp"
#include "treepat/errors.hpp"
#include "treepat/tree_json.hpp"

using namespace treepat;

TEST(TreeJson, RoundTripPlain) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = treepat::testing::randomSmallTree(1, 40, seed);
    const auto doc = parseTreeDocument(serializeTree(t));
    EXPECT_FALSE(doc.isSplit());
    EXPECT_EQ(doc.tree(), t);
    EXPECT_EQ(doc.serialize(), serializeTree(t));
  }
}

TEST(TreeJson, SingleRoot) {
  const auto t = deserializeTree(R"({"nodes":[{"id":0,"parent":null}]})");
  EXPECT_EQ(t.size(), 1u);
}

TEST(TreeJson, IdsInAnyOrder) {
  const auto t = deserializeTree(R"({"nodes":[{"id":2,"parent":1},{"id":0,"parent":null},{"id":1,"parent":0}]})");
  EXPECT_EQ(t, makePath(3));
}

TEST(TreeJson, Errors) {
  try {
    deserializeTree(R"({"nodes":[{"id":0,"parent":null},{"id":1,"parent":null}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("multiple roots"), std::string::npos);
  }
  EXPECT_THROW(deserializeTree("{"), ParseError);
  EXPECT_THROW(deserializeTree(R"({"nodes":[]})"), ParseError);
  EXPECT_THROW(deserializeTree(R"({"nodes":[{"id":0,"parent":null},{"id":0,"parent":0}]})"), ParseError);
  EXPECT_THROW(deserializeTree(R"({"nodes":[{"id":0,"parent":null},{"id":5,"parent":0}]})"), ParseError);
  EXPECT_THROW(deserializeTree(R"({"nodes":[{"id":0,"parent":null},{"id":1,"parent":2},{"id":2,"parent":1}]})"),
               ParseError);
  EXPECT_THROW(deserializeTree(R"({"nodes":[{"id":0,"parent":-1}]})"), ParseError);
  EXPECT_THROW(parseTreeDocument(R"({"nodes":[{"id":0,"parent":null,"balls":[1,1]}]})"), ParseError);
}

TEST(TreeJson, RoundTripSplit) {
  SplitParams p;
  p.b = 3;
  p.s = 3;
  p.s0 = 2;
  p.s1 = 0;
  p.distribution = SplitDistribution::dirichlet(1.5, 3);
  const auto t = generateTrickleDown(p, 60, 11);
  const auto doc = parseTreeDocument(serializeTree(t));
  ASSERT_TRUE(doc.isSplit());
  EXPECT_EQ(doc.tree(), t.tree());
  EXPECT_EQ(doc.split().bags(), t.bags());
  EXPECT_EQ(doc.split().params().s0, 2u);
  EXPECT_EQ(doc.split().params().distribution.name(), p.distribution.name());
  EXPECT_EQ(doc.split().seed(), 11u);
  EXPECT_EQ(doc.serialize(), serializeTree(t));
  EXPECT_EQ(doc.poset().size(), 60u);
}

TEST(TreeJson, MetaCountMustAgree) {
  EXPECT_THROW(parseTreeDocument(R"({"nodes":[{"id":0,"parent":null,"balls":[1]}],"meta":{"n":2}})"), ParseError);
  EXPECT_NO_THROW(parseTreeDocument(R"({"nodes":[{"id":0,"parent":null,"balls":[1]}],"meta":{"n":1}})"));
}
