#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "iocpqa/blockio.hpp"

using namespace iocpqa::blockio;

TEST(IoConfig, RejectsBadParameters) {
    EXPECT_NO_THROW((IoConfig{64, 1024, 16}.check()));
    EXPECT_THROW((IoConfig{64, 1024, 0}.check()), InvalidConfig);
    EXPECT_THROW((IoConfig{64, 1024, 65}.check()), InvalidConfig);
    EXPECT_THROW((IoConfig{64, 32, 16}.check()), InvalidConfig);
    EXPECT_THROW((IoConfig{0, 32, 0}.check()), InvalidConfig);
}

TEST(IoModel, ChargesCeilOfWordsOverB) {
    IoModel io({64, 1024, 16});
    io.charge_record_load(0);
    EXPECT_EQ(io.snapshot().reads, 0u);
    io.charge_record_load(100);
    EXPECT_EQ(io.snapshot().reads, 2u);
    io.charge_record_store(64);
    io.charge_record_store(65);
    EXPECT_EQ(io.snapshot().writes, 3u);
}

TEST(IoModel, PinnedRecordsAreFree) {
    IoModel io({64, 1024, 16});
    const RecordId id = next_record_id();
    io.pin({id, 100});
    EXPECT_EQ(io.charge_record_load(id, 100), 0u);
    EXPECT_EQ(io.charge_record_store(id, 100), 0u);
    EXPECT_EQ(io.snapshot().total(), 0u);
    io.unpin(id);
    EXPECT_EQ(io.charge_record_load(id, 100), 2u);
}

TEST(IoModel, PinsAreReferenceCounted) {
    IoModel io({8, 64, 4});
    const RecordId id = next_record_id();
    io.pin({id, 10});
    io.pin({id, 10});
    io.unpin(id);
    EXPECT_TRUE(io.is_pinned(id));
    io.unpin(id);
    EXPECT_FALSE(io.is_pinned(id));
    EXPECT_THROW(io.unpin(id), UnknownHandle);
    EXPECT_THROW(io.pin({0, 1}), UnknownHandle);
}

TEST(IoModel, PinningWithinMemoryRaisesNoViolation) {
    IoModel io({64, 8 * 4 * 16, 16});
    std::vector<RecordId> ids;
    for (int i = 0; i < 8; ++i) {
        ids.push_back(next_record_id());
        io.pin({ids.back(), 4 * 16});
    }
    EXPECT_FALSE(io.snapshot().violation);
    EXPECT_EQ(io.snapshot().peak_pinned_words, 8u * 4 * 16);
    io.pin({next_record_id(), 1});
    EXPECT_TRUE(io.snapshot().violation);
}

TEST(IoModel, SnapshotAndReset) {
    IoModel io({64, 1024, 16});
    io.charge_record_load(64);
    const auto snap = io.snapshot();
    io.charge_record_load(64);
    EXPECT_EQ(snap.reads, 1u);
    EXPECT_EQ(io.snapshot().reads, 2u);
    io.reset();
    EXPECT_EQ(io.snapshot(), IoCounters{});
}

TEST(IoCounters, TextRoundTripAndJson) {
    IoCounters c;
    c.reads = 3;
    c.writes = 5;
    c.peak_pinned_words = 17;
    EXPECT_EQ(c.to_text(), "reads=3 writes=5 peak_pinned=17");
    EXPECT_EQ(IoCounters::parse_text(c.to_text()), c);
    EXPECT_EQ(c.to_json(), R"({"reads":3,"writes":5,"peak_pinned":17})");
}

TEST(IoModel, ConcurrentChargesAreCounted) {
    IoModel io({64, 1024, 16});
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t)
        ts.emplace_back([&] {
            for (int i = 0; i < 10000; ++i) io.charge_record_load(64);
        });
    for (auto& t : ts) t.join();
    EXPECT_EQ(io.snapshot().reads, 40000u);
}

TEST(OpScope, ReadsEachRecordOncePerScope) {
    IoModel io({4, 1024, 2});
    auto rec = std::make_shared<const BlockMeta>(next_record_id(), 6);
    rec->on_disk = true;
    {
        OpScope s(&io);
        s.touch(rec);
        s.touch(rec);
        s.finish({});
    }
    EXPECT_EQ(io.snapshot().reads, 2u);  // ceil(6/4), once
}

TEST(OpScope, FlushesCreatedRecordsOutsideResultEnds) {
    IoModel io({4, 1024, 2});
    auto a = std::make_shared<const BlockMeta>(next_record_id(), 4);
    auto b = std::make_shared<const BlockMeta>(next_record_id(), 4);
    {
        OpScope s(&io);
        s.created(a);
        s.created(b);
        const RecordId ends[] = {b->id};
        s.finish(ends);
    }
    EXPECT_EQ(io.snapshot().writes, 1u);
    EXPECT_TRUE(a->on_disk);
    EXPECT_FALSE(b->on_disk);
}

TEST(OpScope, NestedScopesJoinTheOuterOne) {
    IoModel io({4, 1024, 2});
    auto rec = std::make_shared<const BlockMeta>(next_record_id(), 4);
    rec->on_disk = true;
    OpScope outer(&io);
    {
        OpScope inner(&io);
        EXPECT_FALSE(inner.is_outermost());
        inner.touch(rec);
        inner.finish({});
    }
    outer.touch(rec);
    outer.finish({});
    EXPECT_EQ(io.snapshot().reads, 1u);
}

TEST(OpScope, ChargeOffPolicyChargesNothing) {
    IoModel io({4, 1024, 2});
    auto rec = std::make_shared<const BlockMeta>(next_record_id(), 4);
    rec->on_disk = true;
    {
        PolicyGuard g({.persist = true, .ends_resident = true, .charge = false});
        OpScope s(&io);
        s.touch(rec);
        s.finish({});
    }
    EXPECT_EQ(io.snapshot().total(), 0u);
}
