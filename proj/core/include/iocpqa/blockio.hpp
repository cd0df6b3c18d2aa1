#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace iocpqa::blockio {

using RecordId = std::uint64_t;

class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownHandle : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// External-memory parameters, all in words (one element = one word).
struct IoConfig {
    std::size_t block_words = 64;        // B
    std::size_t memory_words = 1 << 20;  // M
    std::size_t buffer_b = 16;           // b, 1 <= b <= B

    /// Throws InvalidConfig unless 1 <= b <= B <= M.
    void check() const;

    friend bool operator==(const IoConfig&, const IoConfig&) = default;
};

/// Number of blocks needed to hold `words` words.
std::uint64_t blocks_for(std::size_t words, std::size_t block_words) noexcept;

struct IoCounters {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t peak_pinned_words = 0;
    bool violation = false;

    std::uint64_t total() const noexcept { return reads + writes; }

    /// `reads=<u64> writes=<u64> peak_pinned=<u64>`
    std::string to_text() const;
    std::string to_json() const;

    static IoCounters parse_text(const std::string& text);

    friend bool operator==(const IoCounters&, const IoCounters&) = default;
};

/// Storage header of a record: identity, size, and whether its current
/// contents have ever been flushed to external memory.
struct BlockMeta {
    RecordId id = 0;
    std::size_t words = 0;
    mutable std::atomic<bool> on_disk{false};

    BlockMeta(RecordId id_, std::size_t words_) : id(id_), words(words_) {}
    BlockMeta(const BlockMeta&) = delete;
    BlockMeta& operator=(const BlockMeta&) = delete;
};

RecordId next_record_id() noexcept;

/// Handle used to pin a record: its id and size.
struct RecordHandle {
    RecordId id = 0;
    std::size_t words = 0;
};

/**
 * Simulated block-transfer accounting.
 *
 * Records are converted to blocks by ceil(words / B). Pinned records model
 * the blocks that are resident in main memory and are never charged.
 * Counter updates are atomic; the pinned set is guarded by a mutex.
 */
class IoModel {
public:
    explicit IoModel(IoConfig cfg);

    const IoConfig& config() const noexcept { return cfg_; }

    /// Unconditional charge of ceil(words / B) reads.
    void charge_record_load(std::size_t words) noexcept;
    /// Unconditional charge of ceil(words / B) writes.
    void charge_record_store(std::size_t words) noexcept;

    /// Charge a load of record `id` unless it is pinned. Returns blocks charged.
    std::uint64_t charge_record_load(RecordId id, std::size_t words);
    /// Charge a store of record `id` unless it is pinned. Returns blocks charged.
    std::uint64_t charge_record_store(RecordId id, std::size_t words);

    /// Pins are reference counted; pinning beyond M words raises the violation flag.
    void pin(RecordHandle h);
    void unpin(RecordId id);
    bool is_pinned(RecordId id) const;
    std::uint64_t pinned_words() const;

    IoCounters snapshot() const;
    void reset();

private:
    IoConfig cfg_;
    std::atomic<std::uint64_t> reads_{0};
    std::atomic<std::uint64_t> writes_{0};
    std::atomic<bool> violation_{false};

    mutable std::mutex pin_mu_;
    struct PinEntry {
        std::size_t words = 0;
        std::uint32_t count = 0;
    };
    std::unordered_map<RecordId, PinEntry> pinned_;
    std::uint64_t pinned_words_ = 0;
    std::uint64_t peak_pinned_words_ = 0;
};

/// RAII pin of a set of records; unpins on destruction.
class PinGuard {
public:
    PinGuard() = default;
    PinGuard(IoModel* model, std::vector<RecordHandle> handles);
    PinGuard(PinGuard&& other) noexcept;
    PinGuard& operator=(PinGuard&& other) noexcept;
    PinGuard(const PinGuard&) = delete;
    PinGuard& operator=(const PinGuard&) = delete;
    ~PinGuard();

    void add(RecordHandle h);

private:
    void release() noexcept;

    IoModel* model_ = nullptr;
    std::vector<RecordId> ids_;
};

/// How the current thread's operations are charged.
struct ChargePolicy {
    // Records created by an operation are flushed (charged as writes) when
    // they end up in the interior of the result.
    bool persist = true;
    // The first and last record of every input queue are memory-resident.
    bool ends_resident = true;
    // When false, scopes opened by this thread charge nothing (diagnostics).
    bool charge = true;
};

/// Sets the calling thread's charge policy for its lifetime.
class PolicyGuard {
public:
    explicit PolicyGuard(ChargePolicy p);
    ~PolicyGuard();
    PolicyGuard(const PolicyGuard&) = delete;
    PolicyGuard& operator=(const PolicyGuard&) = delete;

    static ChargePolicy current() noexcept;

private:
    ChargePolicy saved_;
};

/**
 * Charging context of one logical operation.
 *
 * A record is read at most once per scope; records created inside the scope
 * are in memory. On finish(), created records that survive in the interior
 * of the result, and unwritten input-end records that left the end
 * positions, are written. Scopes nest: an inner scope opened while another
 * is active on the same thread joins the outer one.
 */
class OpScope {
public:
    explicit OpScope(IoModel* model);
    ~OpScope();
    OpScope(const OpScope&) = delete;
    OpScope& operator=(const OpScope&) = delete;

    /// Active scope of the calling thread, or nullptr.
    static OpScope* current() noexcept;

    bool is_outermost() const noexcept { return outer_ == nullptr; }
    IoModel* model() const noexcept { return model_; }

    void note_input_end(const std::shared_ptr<const BlockMeta>& b);
    void touch(const std::shared_ptr<const BlockMeta>& b);
    void created(const std::shared_ptr<const BlockMeta>& b);
    void superseded(RecordId id);

    /// Settle writes. `result_ends` stay memory-resident.
    void finish(std::span<const RecordId> result_ends);

    std::uint64_t reads() const noexcept { return reads_; }
    std::uint64_t writes() const noexcept { return writes_; }

private:
    OpScope* root() noexcept;

    IoModel* model_ = nullptr;
    OpScope* outer_ = nullptr;
    OpScope* outer_saved_ = nullptr;
    ChargePolicy policy_;
    bool finished_ = false;

    std::unordered_set<RecordId> in_memory_;
    std::unordered_set<RecordId> superseded_;
    std::vector<std::weak_ptr<const BlockMeta>> created_;
    std::vector<std::weak_ptr<const BlockMeta>> input_ends_;
    std::uint64_t reads_ = 0;
    std::uint64_t writes_ = 0;
};

}  // namespace iocpqa::blockio
