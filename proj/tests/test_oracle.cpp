#include <gtest/gtest.h>

#include <map>
#include <random>

#include "iocpqa/oracle.hpp"

using namespace iocpqa::oracle;

TEST(Oracle, CatenateAndAttrite) {
    EXPECT_EQ(naive_catenate_and_attrite({1, 4, 6}, {5, 8}), (std::vector<Key>{1, 4, 5, 8}));
    EXPECT_EQ(naive_catenate_and_attrite({2, 3}, {1}), (std::vector<Key>{1}));
    EXPECT_EQ(naive_catenate_and_attrite({2, 3}, {}), (std::vector<Key>{2, 3}));
    EXPECT_EQ(naive_catenate_and_attrite({}, {4}), (std::vector<Key>{4}));
}

TEST(Oracle, Maxima) {
    const std::vector<Pt> five{{1, 5}, {2, 3}, {3, 8}, {4, 1}, {5, 6}};
    EXPECT_EQ(naive_maxima(five), (std::vector<Pt>{{3, 8}, {5, 6}}));
    EXPECT_EQ(naive_maxima({{4, 4}}), (std::vector<Pt>{{4, 4}}));
    EXPECT_TRUE(naive_maxima({}).empty());
    // Equal y does not dominate.
    EXPECT_EQ(naive_maxima({{1, 2}, {2, 2}}), (std::vector<Pt>{{1, 2}, {2, 2}}));
}

TEST(Oracle, MaximaIsIdempotentAndFullRangeQueryAgrees) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        std::vector<Pt> p;
        for (int i = 0; i < 60; ++i) p.push_back({i * 3 + static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 40)});
        const auto m = naive_maxima(p);
        EXPECT_EQ(naive_maxima(m), m);
        EXPECT_EQ(naive_query3(p, INT64_MIN, INT64_MAX, INT64_MIN), m);
    }
}

TEST(Oracle, QueryFiltersTheRange) {
    const std::vector<Pt> five{{1, 5}, {2, 3}, {3, 8}, {4, 1}, {5, 6}};
    EXPECT_EQ(naive_query3(five, 1, 2, 4), (std::vector<Pt>{{1, 5}}));
    EXPECT_EQ(naive_query3(five, 1, 2, 0), (std::vector<Pt>{{1, 5}, {2, 3}}));
    EXPECT_TRUE(naive_query3(five, 6, 9, 0).empty());
}

TEST(Oracle, GenOpsIsDeterministic) {
    EXPECT_EQ(gen_ops(5, 1000, 64), gen_ops(5, 1000, 64));
    EXPECT_NE(gen_ops(5, 1000, 64), gen_ops(6, 1000, 64));
    EXPECT_EQ(gen_ops(5, 1234, 8).size(), 1234u);
}

TEST(Oracle, GenOpsCoversEveryKind) {
    std::map<OpKind, int> freq;
    for (const auto& op : gen_ops(1, 10000, 64)) {
        ++freq[op.kind];
        EXPECT_LT(op.a, 64u);
        EXPECT_LT(op.c, 64u);
    }
    for (auto k : {OpKind::Insert, OpKind::Catenate, OpKind::DeleteMin, OpKind::FindMin, OpKind::Drain})
        EXPECT_GT(freq[k], 50) << static_cast<int>(k);
}
