#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "iocpqa/pfdeque.hpp"

using iocpqa::EmptyDeque;
using D = iocpqa::PDeque<int>;

namespace {

D from(std::initializer_list<int> xs) {
    D d;
    for (int x : xs) d = d.inject(x);
    return d;
}

}  // namespace

TEST(PDeque, EmptyHasSizeZero) {
    EXPECT_EQ(D::empty().size(), 0u);
    EXPECT_TRUE(D::empty().is_empty());
}

TEST(PDeque, PopOfPushIsInverse) {
    auto [x, rest] = D::empty().push(7).pop();
    EXPECT_EQ(x, 7);
    EXPECT_TRUE(rest.is_empty());
    auto [y, init] = from({1, 2}).inject(3).eject();
    EXPECT_EQ(y, 3);
    EXPECT_EQ(init.to_vector(), (std::vector<int>{1, 2}));
}

TEST(PDeque, CatenateWithEmptyIsIdentity) {
    auto d = from({4, 5});
    EXPECT_EQ(D::catenate(D::empty(), d).to_vector(), d.to_vector());
    EXPECT_EQ(D::catenate(d, D::empty()).to_vector(), d.to_vector());
}

TEST(PDeque, PushAndInjectOrder) {
    EXPECT_EQ(D::empty().inject(2).push(1).to_vector(), (std::vector<int>{1, 2}));
    EXPECT_EQ(D::catenate(from({1, 2}), from({3})).to_vector(), (std::vector<int>{1, 2, 3}));
}

TEST(PDeque, Accessors) {
    auto d = from({5, 9});
    EXPECT_EQ(d.first(), 5);
    EXPECT_EQ(d.last(), 9);
    EXPECT_EQ(d.front().to_vector(), (std::vector<int>{5}));
    EXPECT_EQ(d.rest().to_vector(), (std::vector<int>{9}));
    EXPECT_EQ(d.at(1), 9);
}

TEST(PDeque, EmptyAccessThrows) {
    D e;
    EXPECT_THROW(e.pop(), EmptyDeque);
    EXPECT_THROW(e.eject(), EmptyDeque);
    EXPECT_THROW(e.first(), EmptyDeque);
    EXPECT_THROW(e.last(), EmptyDeque);
    EXPECT_THROW(e.rest(), EmptyDeque);
    EXPECT_THROW(e.front(), EmptyDeque);
}

TEST(PDeque, OldVersionsSurviveUpdates) {
    auto d1 = from({1, 2, 3});
    auto d2 = d1.push(0);
    auto d3 = D::catenate(d1, d2);
    auto [x, d4] = d3.eject();
    (void)x;
    EXPECT_EQ(d1.to_vector(), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(d2.to_vector(), (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(d3.size(), 7u);
    EXPECT_EQ(d4.size(), 6u);
}

TEST(PDeque, CatenateIsAssociative) {
    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        D a, b, c;
        for (int i = rng() % 20; i > 0; --i) a = a.inject(static_cast<int>(rng()));
        for (int i = rng() % 20; i > 0; --i) b = b.inject(static_cast<int>(rng()));
        for (int i = rng() % 20; i > 0; --i) c = c.inject(static_cast<int>(rng()));
        EXPECT_EQ(D::catenate(a, D::catenate(b, c)).to_vector(), D::catenate(D::catenate(a, b), c).to_vector());
    }
}

TEST(PDeque, RandomVersionsMatchListOracle) {
    std::mt19937_64 rng(11);
    std::vector<D> versions{D::empty()};
    std::vector<std::vector<int>> ref{{}};
    for (int i = 0; i < 10000; ++i) {
        const std::size_t v = rng() % versions.size();
        const D& d = versions[v];
        std::vector<int> r = ref[v];
        D out;
        switch (rng() % 6) {
            case 0:
                out = d.push(i);
                r.insert(r.begin(), i);
                break;
            case 1:
                out = d.inject(i);
                r.push_back(i);
                break;
            case 2:
                if (r.empty()) continue;
                {
                    auto [x, rest] = d.pop();
                    ASSERT_EQ(x, r.front());
                    out = rest;
                    r.erase(r.begin());
                }
                break;
            case 3:
                if (r.empty()) continue;
                {
                    auto [x, init] = d.eject();
                    ASSERT_EQ(x, r.back());
                    out = init;
                    r.pop_back();
                }
                break;
            default: {
                const std::size_t w = rng() % versions.size();
                out = D::catenate(d, versions[w]);
                r.insert(r.end(), ref[w].begin(), ref[w].end());
                break;
            }
        }
        if (r.size() > 4000) continue;
        ASSERT_EQ(out.size(), r.size());
        versions.push_back(out);
        ref.push_back(std::move(r));
    }
    for (std::size_t v = 0; v < versions.size(); ++v) ASSERT_EQ(versions[v].to_vector(), ref[v]) << "version " << v;
}

TEST(PDeque, RestOfPushMatchesOriginal) {
    std::mt19937 rng(5);
    for (int t = 0; t < 100; ++t) {
        D d;
        for (int i = rng() % 30; i > 0; --i) d = rng() % 2 ? d.push(i) : d.inject(i);
        EXPECT_EQ(d.push(-1).rest().to_vector(), d.to_vector());
        EXPECT_EQ(d.inject(-1).front().to_vector(), d.to_vector());
    }
}
