#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iocpqa/blockio.hpp"
#include "iocpqa/pfdeque.hpp"

namespace iocpqa {

class EmptyQueue : public std::out_of_range {
public:
    explicit EmptyQueue(const char* op) : std::out_of_range(std::string(op) + " on empty queue") {}
};

class ConfigMismatch : public std::invalid_argument {
public:
    ConfigMismatch() : std::invalid_argument("queues were built with different contexts") {}
};

/// A queue handed to concat_sequence is not in the required state.
class PreconditionViolated : public std::invalid_argument {
public:
    PreconditionViolated(std::size_t index, long state)
        : std::invalid_argument("concat_sequence: queue " + std::to_string(index) +
                                " is in state " + std::to_string(state)),
          index_(index),
          state_(state) {}
    std::size_t index() const noexcept { return index_; }
    long state() const noexcept { return state_; }

private:
    std::size_t index_;
    long state_;
};

/// Internal contract violation; carries a validator dump.
class InvariantBroken : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Parameters shared by a family of queues: buffer size b and the block cost model.
class Context {
public:
    explicit Context(blockio::IoConfig cfg, std::shared_ptr<blockio::IoModel> io = nullptr)
        : cfg_(cfg), io_(std::move(io)) {
        cfg_.check();
        if (io_ && !(io_->config() == cfg_)) throw blockio::InvalidConfig("Context: IoModel config differs");
    }

    static std::shared_ptr<const Context> make(blockio::IoConfig cfg, bool with_io = true) {
        auto io = with_io ? std::make_shared<blockio::IoModel>(cfg) : nullptr;
        return std::make_shared<const Context>(cfg, std::move(io));
    }

    std::size_t b() const noexcept { return cfg_.buffer_b; }
    const blockio::IoConfig& config() const noexcept { return cfg_; }
    blockio::IoModel* io() const noexcept { return io_.get(); }

private:
    blockio::IoConfig cfg_;
    std::shared_ptr<blockio::IoModel> io_;
};

using ContextPtr = std::shared_ptr<const Context>;

struct Violation {
    std::string invariant;  // "I.1".."I.8", "shape", "cache"
    std::string detail;
};

/// Process-wide Bias counters, for tests and diagnostics.
struct BiasStats {
    std::uint64_t calls = 0;
    int max_depth = 0;
};
BiasStats bias_stats() noexcept;
void reset_bias_stats() noexcept;
namespace detail {
void note_bias(int depth) noexcept;
}

// Bias recursion deeper than this is a contract violation.
inline constexpr int kMaxBiasDepth = 3;
namespace detail {

/// Immutable sorted slice of a shared element array.
template <typename T>
class Buffer {
public:
    Buffer() = default;
    explicit Buffer(std::vector<T> v)
        : data_(std::make_shared<const std::vector<T>>(std::move(v))),
          lo_(0),
          hi_(data_->size()) {}

    std::size_t size() const noexcept { return hi_ - lo_; }
    bool empty() const noexcept { return hi_ == lo_; }
    const T& operator[](std::size_t i) const { return (*data_)[lo_ + i]; }
    const T& front() const { return (*data_)[lo_]; }
    const T& back() const { return (*data_)[hi_ - 1]; }
    const T* begin() const { return data_ ? data_->data() + lo_ : nullptr; }
    const T* end() const { return data_ ? data_->data() + hi_ : nullptr; }

    Buffer take(std::size_t n) const {
        Buffer r = *this;
        r.hi_ = lo_ + std::min(n, size());
        return r;
    }
    Buffer drop(std::size_t n) const {
        Buffer r = *this;
        r.lo_ = lo_ + std::min(n, size());
        return r;
    }

    static Buffer concat(const Buffer& a, const Buffer& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        std::vector<T> v;
        v.reserve(a.size() + b.size());
        v.insert(v.end(), a.begin(), a.end());
        v.insert(v.end(), b.begin(), b.end());
        return Buffer(std::move(v));
    }

private:
    std::shared_ptr<const std::vector<T>> data_;
    std::size_t lo_ = 0;
    std::size_t hi_ = 0;
};

template <typename T, typename Compare>
struct Parts;

/// A record: sorted buffer plus an optional child queue whose elements all
/// exceed the buffer maximum. min/max/size/child are header data; reading
/// buffer contents is what the cost model charges.
template <typename T, typename Compare>
struct RecordNode : blockio::BlockMeta {
    Buffer<T> buf;
    std::shared_ptr<const Parts<T, Compare>> child;
    std::size_t total;  // buffer plus child elements

    RecordNode(Buffer<T> b, std::shared_ptr<const Parts<T, Compare>> c)
        : blockio::BlockMeta(blockio::next_record_id(), b.size()),
          buf(std::move(b)),
          child(std::move(c)),
          total(buf.size() + (child ? child->elements() : 0)) {}

    bool simple() const noexcept { return child == nullptr; }
    const T& min() const { return buf.front(); }
    const T& max() const { return buf.back(); }
    std::size_t size() const noexcept { return buf.size(); }
};

template <typename T, typename Compare>
using Rec = std::shared_ptr<const RecordNode<T, Compare>>;

/// One queue version: clean deque C, buffer deque B and dirty deques D_1..D_k.
template <typename T, typename Compare>
struct Parts {
    using R = Rec<T, Compare>;
    using Deque = PDeque<R>;

    Deque clean;
    Deque buffer;
    PDeque<Deque> dirty;
    std::size_t dirty_records = 0;
    std::size_t clean_elems = 0;
    std::size_t buffer_elems = 0;
    std::size_t dirty_elems = 0;

    std::size_t elements() const noexcept { return clean_elems + buffer_elems + dirty_elems; }
    bool empty() const noexcept { return elements() == 0; }
    long delta() const noexcept {
        return static_cast<long>(clean.size()) - static_cast<long>(dirty_records) -
               static_cast<long>(dirty.size()) + 1;
    }
    bool biasable() const noexcept { return !buffer.is_empty() || !dirty.is_empty(); }
    std::size_t top_records() const noexcept { return clean.size() + buffer.size() + dirty_records; }

    R first_record() const {
        if (!clean.is_empty()) return clean.first();
        if (!buffer.is_empty()) return buffer.first();
        if (!dirty.is_empty()) return dirty.first().first();
        return nullptr;
    }
    R last_record() const {
        if (!dirty.is_empty()) return dirty.last().last();
        if (!buffer.is_empty()) return buffer.last();
        if (!clean.is_empty()) return clean.last();
        return nullptr;
    }
};

}  // namespace detail

/**
 * I/O-efficient catenable priority queue with attrition.
 *
 * A Queue is an immutable version handle; every operation returns new
 * versions and leaves its inputs valid. Copying is O(1).
 */
template <typename T, typename Compare = std::less<T>>
class Queue {
public:
    using value_type = T;
    using Parts = detail::Parts<T, Compare>;
    using PartsPtr = std::shared_ptr<const Parts>;
    using Record = detail::Rec<T, Compare>;

    Queue() = default;

    static Queue empty(ContextPtr ctx) { return Queue(std::move(ctx), nullptr); }
    static Queue singleton(ContextPtr ctx, T e);

    const ContextPtr& context() const noexcept { return ctx_; }
    bool is_empty() const noexcept { return !parts_ || parts_->empty(); }
    /// Elements stored in the reachable buffers, including ones pending attrition.
    std::size_t stored_elements() const noexcept { return parts_ ? parts_->elements() : 0; }
    /// Identity of the version, for persistence checks.
    const void* identity() const noexcept { return parts_.get(); }
    const PartsPtr& parts() const noexcept { return parts_; }

    Queue(ContextPtr ctx, PartsPtr parts) : ctx_(std::move(ctx)), parts_(std::move(parts)) {}

private:
    ContextPtr ctx_;
    PartsPtr parts_;
};

namespace detail {

template <typename T, typename Compare>
class Engine {
public:
    using P = Parts<T, Compare>;
    using PP = std::shared_ptr<const P>;
    using R = Rec<T, Compare>;
    using Deque = PDeque<R>;
    using Buf = Buffer<T>;

    explicit Engine(const Context& ctx, bool sequence_mode = false)
        : ctx_(ctx), b_(ctx.b()), scope_(ctx.io()), seq_(sequence_mode) {}

    blockio::OpScope& scope() noexcept { return scope_; }

    bool lt(const T& a, const T& b) const { return less_(a, b); }

    static PP freeze(P p) {
        if (p.empty()) return nullptr;
        return std::make_shared<const P>(std::move(p));
    }

    void note_inputs(const PP& q) {
        if (!q) return;
        scope_.note_input_end(q->first_record());
        scope_.note_input_end(q->last_record());
    }

    /// Working copy of input q. An end record already used as an end by an
    /// earlier input is replaced by a copy, so no record sits twice in a result.
    P adopt(const PP& q) {
        P p = *q;
        const R f = p.first_record();
        const R l = p.last_record();
        const R nf = own(f);
        if (nf != f) replace_first(p, f, nf);
        const R nl = l == f ? nf : own(l);
        if (nl != l) replace_last(p, l, nl);
        return p;
    }

    void finish(const std::vector<PP>& results) {
        std::vector<blockio::RecordId> ends;
        for (const auto& q : results) {
            if (!q) continue;
            if (auto f = q->first_record()) ends.push_back(f->id);
            if (auto l = q->last_record()) ends.push_back(l->id);
        }
        scope_.finish(ends);
    }

    R make(Buf buf, PP child) {
        auto r = std::make_shared<const RecordNode<T, Compare>>(std::move(buf), std::move(child));
        scope_.created(r);
        return r;
    }

    /// Read access to a record's buffer.
    const Buf& load(const R& r) {
        scope_.touch(r);
        return r->buf;
    }

    /// r leaves the structure for good; it never needs a write.
    void discard(const R& r) {
        if (r) scope_.superseded(r->id);
    }
    void discard_deque(const Deque& d) {
        if (d.is_empty()) return;
        discard(d.first());
        discard(d.last());
    }
    void discard_ends(const P& q) {
        discard(q.first_record());
        discard(q.last_record());
    }

    /// Number of leading elements of r strictly smaller than e.
    std::size_t count_less(const R& r, const T& e) {
        if (!lt(r->min(), e)) return 0;
        if (lt(r->max(), e)) return r->size();
        const Buf& l = load(r);
        auto it = std::lower_bound(l.begin(), l.end(), e, less_);
        return static_cast<std::size_t>(it - l.begin());
    }

    // ---- bookkeeping helpers -------------------------------------------

    static void clean_push_back(P& p, R r) {
        p.clean_elems += r->size();
        p.clean = p.clean.inject(std::move(r));
    }
    static void clean_push_front(P& p, R r) {
        p.clean_elems += r->size();
        p.clean = p.clean.push(std::move(r));
    }
    static R clean_pop_front(P& p) {
        auto [r, rest] = p.clean.pop();
        p.clean = rest;
        p.clean_elems -= r->size();
        return r;
    }

    static void dirty_replace_first(P& p, const R& old_r, R r) {
        p.dirty_elems = p.dirty_elems - old_r->total + r->total;
        p.dirty = p.dirty.with_first(p.dirty.first().with_first(std::move(r)));
    }

    static R dirty_pop_first(P& p) {
        auto d1 = p.dirty.first();
        auto [r, rest] = d1.pop();
        p.dirty_records -= 1;
        p.dirty_elems -= r->total;
        p.dirty = rest.is_empty() ? p.dirty.rest() : p.dirty.with_first(rest);
        return r;
    }

    static R dirty_pop_last(P& p) {
        auto dk = p.dirty.last();
        auto [r, rest] = dk.eject();
        p.dirty_records -= 1;
        p.dirty_elems -= r->total;
        p.dirty = rest.is_empty() ? p.dirty.front() : p.dirty.with_last(rest);
        return r;
    }

    static void dirty_replace_last(P& p, const R& old_r, R r) {
        p.dirty_elems = p.dirty_elems - old_r->total + r->total;
        p.dirty = p.dirty.with_last(p.dirty.last().with_last(std::move(r)));
    }

    static std::size_t deque_total(const Deque& d) {
        std::size_t n = 0;
        d.for_each([&](const R& r) { n += r->total; });
        return n;
    }

    static void dirty_inject_deque(P& p, const Deque& d, std::size_t total) {
        if (d.is_empty()) return;
        p.dirty = p.dirty.inject(d);
        p.dirty_records += d.size();
        p.dirty_elems += total;
    }

    static void move_buffer_to_clean(P& p) {
        p.clean = Deque::catenate(p.clean, p.buffer);
        p.clean_elems += p.buffer_elems;
        p.buffer = Deque();
        p.buffer_elems = 0;
    }

    // ---- Bias ----------------------------------------------------------

    /// Improves Delta(p) by at least one. Requires p.biasable().
    void bias(P& p, int depth = 0) {
        if (depth > kMaxBiasDepth) throw InvariantBroken("Bias: recursion depth exceeded");
        note_bias(depth);
        const long before = p.delta();
        if (!p.buffer.is_empty()) {
            if (p.dirty.is_empty()) {
                move_buffer_to_clean(p);
            } else {
                bias_buffer(p, depth);
            }
        } else if (p.dirty.size() > 1) {
            bias_merge_dirty(p);
        } else if (p.dirty.size() == 1) {
            bias_single_dirty(p, depth);
        } else {
            return;
        }
        if (p.delta() < before + 1 && p.biasable()) bias(p, depth + 1);
    }

    // Split l1' and l2 per the shared size rules; returns (record for the
    // clean side or nothing, replacement for l2's record or nothing when
    // l2 absorbed l1').
    struct Rebalanced {
        std::optional<Buf> left;   // goes before r2 as its own simple record
        Buf right;                 // r2's new buffer
        bool prepended = false;    // l1' merged into r2's buffer
    };

    // allow_borrow: elements of r2 may move to the clean side. Only sound
    // when no later dirty deque can still attrite them.
    Rebalanced rebalance(const Buf& l1p, const R& r2, bool allow_prepend, bool allow_borrow) {
        const std::size_t n1 = l1p.size();
        const std::size_t n2 = r2->size();
        Rebalanced out;
        auto keep_apart = [&] {
            out.left = l1p;
            out.right = r2->buf;
        };
        auto merge = [&] {
            out.right = Buf::concat(l1p, load(r2));
            out.prepended = true;
        };
        auto borrow = [&](std::size_t t) {
            const Buf& l2 = load(r2);
            out.left = Buf::concat(l1p, l2.take(t));
            out.right = l2.drop(t);
        };
        if (!allow_prepend) {
            // Records still queued in B sit between l1' and l2.
            keep_apart();
        } else if (n1 < b_) {
            if (n2 <= 2 * b_) merge();
            else if (allow_borrow) borrow(b_);
            else keep_apart();
        } else if (n1 < 2 * b_) {
            if (n2 <= 2 * b_ && n1 + n2 <= 3 * b_) merge();
            else if (!allow_borrow) keep_apart();
            else if (n2 <= 2 * b_) borrow(2 * b_ - n1);
            else borrow(b_);
        } else {
            keep_apart();
        }
        if (out.left && out.left->empty()) out.left.reset();
        return out;
    }

    R rebuilt(const R& r2, const Buf& right) {
        if (right.begin() == r2->buf.begin() && right.size() == r2->size()) return r2;
        discard(r2);
        return make(right, r2->child);
    }

    // Case |B(Q)| > 0.
    void bias_buffer(P& p, int depth) {
        auto [r1, brest] = p.buffer.pop();
        p.buffer = brest;
        p.buffer_elems -= r1->size();
        const R r2 = p.dirty.first().first();
        const T e = r2->min();
        const std::size_t keep = count_less(r1, e);
        const bool attrited = keep < r1->size();
        if (attrited) {
            discard_deque(p.buffer);
            p.buffer = Deque();
            p.buffer_elems = 0;
        }
        // An unattrited record may only be folded into first(D_1) when nothing
        // else is left in B, otherwise min(first(B)) < min(first(D_1)) breaks.
        const bool allow_prepend = p.buffer.is_empty();
        const Buf l1p = attrited ? load(r1).take(keep) : r1->buf;

        Rebalanced rb = rebalance(l1p, r2, allow_prepend, p.dirty.size() == 1);
        R nr2 = rebuilt(r2, rb.right);
        if (nr2 != r2) dirty_replace_first(p, r2, nr2);
        if (rb.left) {
            if (!attrited && rb.left->size() == r1->size() && rb.left->begin() == r1->buf.begin()) {
                clean_push_back(p, r1);
            } else {
                discard(r1);
                clean_push_back(p, make(*rb.left, nullptr));
            }
        } else {
            discard(r1);
        }
        // Later records of B may be attrited entirely by e.
        if (!p.buffer.is_empty() && !lt(p.buffer.first()->min(), p.dirty.first().first()->min())) {
            discard_deque(p.buffer);
            p.buffer = Deque();
            p.buffer_elems = 0;
        }
        if (rb.prepended && p.biasable()) bias(p, depth + 1);
    }

    // Case |B(Q)| = 0, k > 1.
    void bias_merge_dirty(P& p) {
        const std::size_t k = p.dirty.size();
        const Deque dk = p.dirty.last();
        const Deque dk1 = p.dirty.at(k - 2);
        const R r2 = dk.first();
        const T e = r2->min();
        const R r1 = dk1.last();
        PDeque<Deque> head = p.dirty.front().front();

        if (!lt(r1->min(), e)) {
            // last(D_{k-1}) is attrited entirely.
            discard(r1);
            p.dirty_records -= 1;
            p.dirty_elems -= r1->total;
            Deque dk1r = dk1.front();
            p.dirty = dk1r.is_empty() ? head.inject(dk) : head.inject(dk1r).inject(dk);
            return;
        }
        if (!lt(r1->max(), e)) {
            const std::size_t keep = count_less(r1, e);
            const Buf l1p = load(r1).take(keep);
            discard(r1);
            Rebalanced rb = rebalance(l1p, r2, true, true);
            R nr2 = rebuilt(r2, rb.right);
            Deque ndk = (nr2 != r2) ? dk.with_first(nr2) : dk;
            std::size_t elems = p.dirty_elems - r1->total - r2->total + nr2->total;
            std::size_t recs = p.dirty_records - 1;
            if (rb.left) {
                R nr1 = make(*rb.left, nullptr);
                ndk = ndk.push(nr1);
                elems += nr1->total;
                recs += 1;
            }
            p.dirty = head.inject(Deque::catenate(dk1.front(), ndk));
            p.dirty_elems = elems;
            p.dirty_records = recs;
            return;
        }
        p.dirty = head.inject(Deque::catenate(dk1, dk));
    }

    // Case |B(Q)| = 0, k = 1.
    void bias_single_dirty(P& p, int depth) {
        const bool was_first = p.clean.is_empty();
        R r = dirty_pop_first(p);
        R moved = r;
        if (!r->simple()) {
            discard(r);
            moved = make(r->buf, nullptr);
        }
        clean_push_back(p, moved);
        if (r->child) absorb_child(p, *r->child);
        if (was_first && moved->size() <= 2 * b_ && p.clean.size() + p.buffer.size() + p.dirty_records > 1)
            merge_moved_first(p, depth);
    }

    // Merge the queue Q' pointed to by a record that just moved into C.
    void absorb_child(P& p, const P& q) {
        std::optional<T> e;
        if (!p.dirty.is_empty()) e = p.dirty.first().first()->min();
        const T& qmin = q.clean.first()->min();
        if (e && !lt(qmin, *e)) {  // Q' attrited entirely
            discard_ends(q);
            return;
        }
        if (e && !lt(q.clean.last()->max(), *e)) {
            discard_deque(q.buffer);
            if (!q.dirty.is_empty()) discard(q.last_record());
            p.buffer = q.clean;
            p.buffer_elems = q.clean_elems;
            return;
        }
        if (q.dirty.is_empty() || (e && !lt(q.dirty.first().first()->min(), *e))) {
            p.clean = Deque::catenate(p.clean, q.clean);
            p.clean_elems += q.clean_elems;
            if (!q.buffer.is_empty() && (!e || lt(q.buffer.first()->min(), *e))) {
                p.buffer = q.buffer;
                p.buffer_elems = q.buffer_elems;
            } else {
                discard_deque(q.buffer);
            }
            if (!q.dirty.is_empty()) discard(q.last_record());
            if (p.dirty.is_empty() && !p.buffer.is_empty()) move_buffer_to_clean(p);
            return;
        }
        p.clean = Deque::catenate(p.clean, q.clean);
        p.clean_elems += q.clean_elems;
        p.buffer = q.buffer;
        p.buffer_elems = q.buffer_elems;
        p.dirty = PDeque<Deque>::catenate(q.dirty, p.dirty);
        p.dirty_records += q.dirty_records;
        p.dirty_elems += q.dirty_elems;
    }

    // The record moved into an empty C is small: combine it with the next
    // first record so that first(C) does not stay undersized.
    void merge_moved_first(P& p, int depth) {
        R moved = clean_pop_front(p);
        while (p.clean.is_empty() && p.biasable()) bias(p, depth + 1);
        if (p.clean.is_empty()) {
            clean_push_front(p, moved);
            return;
        }
        R next = clean_pop_front(p);
        const Buf& l = load(moved);
        const Buf& l2 = load(next);
        discard(moved);
        discard(next);
        if (l.size() + l2.size() > 3 * b_) {
            Buf comb = Buf::concat(l, l2);
            clean_push_front(p, make(comb.drop(2 * b_), nullptr));
            clean_push_front(p, make(comb.take(2 * b_), nullptr));
        } else {
            clean_push_front(p, make(Buf::concat(l, l2), nullptr));
        }
    }

    // ---- Normalisation shared by all public operations --------------------

    // Merge/borrow so that first(C) holds at least b elements. Requires
    // |C| >= 2. Returns true when two records were merged.
    bool refill_first(P& p) {
        R first = clean_pop_front(p);
        R next = clean_pop_front(p);
        const Buf& l = load(first);
        const Buf& m = load(next);
        discard(first);
        discard(next);
        const std::size_t s = m.size();
        if (s <= 2 * b_) {
            clean_push_front(p, make(Buf::concat(l, m), nullptr));
            return true;
        }
        const std::size_t moved = s <= 3 * b_ ? b_ : 2 * b_;
        clean_push_front(p, make(m.drop(moved), nullptr));
        clean_push_front(p, make(Buf::concat(l, m.take(moved)), nullptr));
        return false;
    }

    // Logical content: records in queue order, each buf followed by its
    // child, combined left to right with attrition.
    std::vector<T> logical(const P& q) {
        std::vector<R> recs;
        auto add = [&](const R& r) { recs.push_back(r); };
        q.clean.for_each(add);
        q.buffer.for_each(add);
        q.dirty.for_each([&](const Deque& d) { d.for_each(add); });
        std::vector<T> acc;
        for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
            discard(*it);
            const Buf& l = load(*it);
            std::vector<T> cur(l.begin(), l.end());
            if ((*it)->child) {
                auto tail = logical(*(*it)->child);
                cur.insert(cur.end(), tail.begin(), tail.end());
            }
            if (!acc.empty()) {
                cur.erase(std::lower_bound(cur.begin(), cur.end(), acc.front(), less_), cur.end());
                cur.insert(cur.end(), acc.begin(), acc.end());
            }
            acc = std::move(cur);
        }
        return acc;
    }

    // Fold an undersized first(rest(C)) into first(C). Reads only C[0], C[1].
    void widen_second(P& p) {
        const R a = clean_pop_front(p);
        const R c = clean_pop_front(p);
        Buf comb = Buf::concat(load(a), load(c));
        discard(a);
        discard(c);
        if (comb.size() <= 4 * b_) {
            clean_push_front(p, make(comb, nullptr));
        } else {
            clean_push_front(p, make(comb.drop(2 * b_), nullptr));
            clean_push_front(p, make(comb.take(2 * b_), nullptr));
        }
    }

    // Restores the shape invariants after an operation. `top` also keeps
    // first(rest(C)) at >= b elements unless it is last(Q), so that the
    // queue can later lose first(C) without touching further records.
    void normalize(P& p, bool top = true) {
        if (p.empty()) return;
        if (p.elements() < b_ && (p.top_records() > 1 || p.first_record()->child)) {
            auto v = logical(p);
            p = P{};
            clean_push_back(p, make(Buf(std::move(v)), nullptr));
            return;
        }
        if (!p.buffer.is_empty() && p.dirty.is_empty()) move_buffer_to_clean(p);
        int guard = 0;
        while (p.clean.is_empty() && p.biasable()) {
            bias(p);
            if (++guard > 4) throw InvariantBroken("normalize: clean deque stays empty");
        }
        guard = 0;
        while (p.clean.first()->size() < b_ && p.elements() >= b_) {
            while (p.clean.size() < 2 && p.biasable()) {
                bias(p);
                if (++guard > 8) throw InvariantBroken("normalize: cannot refill first record");
            }
            if (p.clean.size() < 2) break;
            if (refill_first(p) && p.delta() < 0 && p.biasable()) bias(p);
            if (++guard > 8) throw InvariantBroken("normalize: first record stays small");
        }
        guard = 0;
        while (top && p.clean.size() >= 2 && p.clean.at(1)->size() < b_ && p.clean.at(1) != p.last_record()) {
            widen_second(p);
            if (p.delta() < 0 && p.biasable()) bias(p);
            if (++guard > 8) throw InvariantBroken("normalize: second record stays small");
        }
        if (p.delta() < 0) throw InvariantBroken("Delta < 0 after operation");
    }

    // ---- DeleteMin -------------------------------------------------------

    std::pair<T, P> delete_min(P p) {
        R r = clean_pop_front(p);
        const Buf& l0 = load(r);
        T e = l0.front();
        discard(r);
        Buf l = l0.drop(1);
        if (p.empty() && l.empty()) return {e, P{}};
        const std::size_t total_after = p.elements() + l.size();
        bool aggravated = false;
        if (l.empty()) {
            aggravated = true;
            while (p.clean.is_empty() && p.biasable()) bias(p);
        } else {
            clean_push_front(p, make(l, nullptr));
            if (l.size() < b_ && total_after >= b_) {
                int guard = 0;
                while (p.clean.size() == 1 && p.biasable()) {
                    bias(p);
                    if (++guard > 4) throw InvariantBroken("DeleteMin: no successor record");
                }
                if (p.clean.size() >= 2) aggravated = refill_first(p);
            }
        }
        if (aggravated && p.biasable()) bias(p);
        normalize(p);
        return {e, std::move(p)};
    }

    // ---- CatenateAndAttrite ----------------------------------------------

    static const T& queue_min(const P& p) { return p.clean.first()->min(); }

    P catenate(P p1, P p2) {
        if (p2.empty()) return p1;
        if (p1.empty()) return p2;
        const T e = queue_min(p2);
        if (p1.elements() < b_) return catenate_small_left(p1, std::move(p2), e);
        if (p2.elements() < b_) {
            if (auto r = catenate_small_right(p1, p2, e)) return std::move(*r);
        }
        return catenate_general(std::move(p1), std::move(p2), e);
    }

    // |Q1| < b: Q1 is one record; fold its survivors into first(Q2).
    P catenate_small_left(const P& p1, P p2, const T& e) {
        const R r1 = p1.clean.first();
        const std::size_t keep = count_less(r1, e);
        if (keep == 0) {
            discard(r1);
            return p2;
        }
        const Buf l1p = keep == r1->size() ? load(r1) : load(r1).take(keep);
        discard(r1);
        const R r2 = clean_pop_front(p2);
        const Buf& l2 = load(r2);
        discard(r2);
        if (keep + l2.size() <= 4 * b_) {
            clean_push_front(p2, make(Buf::concat(l1p, l2), nullptr));
        } else {
            const std::size_t t = 2 * b_ - keep;
            clean_push_front(p2, make(l2.drop(t), nullptr));
            clean_push_front(p2, make(Buf::concat(l1p, l2.take(t)), nullptr));
        }
        return p2;
    }

    enum class Where { Clean, Dirty };

    // |Q2| < b and Q1 large: try to absorb Q2 into one of the last two records.
    std::optional<P> catenate_small_right(const P& p1, const P& p2, const T& e) {
        const R q2rec = p2.clean.first();
        R r2, r1;
        Where w2 = Where::Clean, w1 = Where::Clean;
        if (!p1.dirty.is_empty()) {
            const Deque dk = p1.dirty.last();
            r2 = dk.last();
            w2 = Where::Dirty;
            if (dk.size() >= 2) {
                r1 = dk.at(dk.size() - 2);
                w1 = Where::Dirty;
            } else if (p1.dirty.size() == 1 && p1.buffer.is_empty()) {
                // Earlier dirty deques and B are attrited by min(r2), so only
                // C can hold r2's live predecessor.
                r1 = p1.clean.last();
                w1 = Where::Clean;
            }
        } else if (!p1.buffer.is_empty()) {
            return std::nullopt;
        } else {
            r2 = p1.clean.last();
            w2 = Where::Clean;
            if (p1.clean.size() >= 2) r1 = p1.clean.at(p1.clean.size() - 2);
        }
        auto cap = [&](Where w) { return w == Where::Dirty ? 5 * b_ : 4 * b_; };

        if (r1 && !lt(r1->min(), e)) return std::nullopt;
        if (r1 && !lt(r1->max(), e)) {
            // e cuts into r1: drop r2, merge r1's survivors with Q2.
            const std::size_t keep = count_less(r1, e);
            if (keep + q2rec->size() > cap(w1)) return std::nullopt;
            P q = p1;
            R nr1 = make(Buf::concat(load(r1).take(keep), load(q2rec)), nullptr);
            discard(r1);
            discard(q2rec);
            discard(r2);
            if (w2 == Where::Dirty) {
                dirty_pop_last(q);
            } else {
                q.clean = q.clean.front();
                q.clean_elems -= r2->size();
            }
            if (w1 == Where::Dirty) {
                dirty_replace_last(q, r1, nr1);
            } else {
                q.clean_elems = q.clean_elems - r1->size() + nr1->size();
                q.clean = q.clean.with_last(nr1);
            }
            return q;
        }
        if (!lt(r2->min(), e)) return std::nullopt;
        if (!r2->simple() && lt(r2->max(), e)) return std::nullopt;
        const std::size_t keep = count_less(r2, e);
        if (keep + q2rec->size() > cap(w2)) return std::nullopt;
        P q = p1;
        const Buf& l = load(r2);
        R nr2 = make(Buf::concat(l.take(keep), load(q2rec)), nullptr);
        discard(r2);
        discard(q2rec);
        if (w2 == Where::Dirty) {
            dirty_replace_last(q, r2, nr2);
        } else {
            q.clean_elems = q.clean_elems - r2->size() + nr2->size();
            q.clean = q.clean.with_last(nr2);
        }
        return q;
    }

    // Q2 minus first(C(Q2)), repaired into a valid queue.
    PP split_rest(P p2) {
        clean_pop_front(p2);
        if (p2.empty()) return nullptr;
        if (seq_) {
            if (p2.delta() < 0 && p2.biasable()) bias(p2);
        } else if (p2.biasable()) {
            bias(p2);
        }
        normalize(p2, false);
        return freeze(std::move(p2));
    }

    void bias_after(P& q, int times) {
        if (seq_) {
            while (q.delta() < 1 && q.biasable()) bias(q);
        } else {
            for (int i = 0; i < times && q.biasable(); ++i) bias(q);
        }
    }

    P catenate_general(P p1, P p2, const T& e) {
        // Case 1: Q1 is attrited entirely.
        if (!lt(queue_min(p1), e)) {
            discard_ends(p1);
            return p2;
        }
        const R l = p2.clean.first();
        PP rest = split_rest(std::move(p2));
        R head = l;
        if (rest) {
            discard(l);
            head = make(l->buf, rest);
        }

        // Case 2: e <= max(last(C(Q1))).
        if (!lt(p1.clean.last()->max(), e)) {
            P q;
            q.buffer = p1.clean;
            q.buffer_elems = p1.clean_elems;
            dirty_inject_deque(q, Deque().inject(head), head->total);
            bias_after(q, 1);
            return q;
        }
        // Case 3: e <= min(first(D_1(Q1))), or no dirty deques.
        if (p1.dirty.is_empty() || !lt(p1.dirty.first().first()->min(), e)) {
            P q = p1;
            if (!q.dirty.is_empty()) discard(q.last_record());
            q.dirty = PDeque<Deque>();
            q.dirty_records = 0;
            q.dirty_elems = 0;
            if (!q.buffer.is_empty() && !lt(q.buffer.first()->min(), e)) {
                discard_deque(q.buffer);
                q.buffer = Deque();
                q.buffer_elems = 0;
            }
            dirty_inject_deque(q, Deque().inject(head), head->total);
            bias_after(q, 1);
            return q;
        }
        // Case 4: attach Q2 as a new last dirty deque.
        P q = std::move(p1);
        const R l1 = q.dirty.last().last();
        Deque nd;
        if (l1->size() < b_) {
            dirty_pop_last(q);
            discard(l1);
            const std::size_t keep = count_less(l1, e);
            const Buf l1p = load(l1).take(keep);
            const Buf& l2 = load(l);
            discard(head);
            if (keep + l2.size() <= 4 * b_) {
                nd = nd.inject(make(Buf::concat(l1p, l2), rest));
            } else {
                if (!l1p.empty()) nd = nd.inject(make(Buf::concat(l1p, l2.take(2 * b_)), nullptr));
                else nd = nd.inject(make(l2.take(2 * b_), nullptr));
                nd = nd.inject(make(l2.drop(2 * b_), rest));
            }
        } else {
            nd = nd.inject(head);
        }
        dirty_inject_deque(q, nd, deque_total(nd));
        if (seq_) {
            if (q.buffer.is_empty() && q.dirty.size() > 1) {
                const long before = q.delta();
                bias_merge_dirty(q);
                note_bias(0);
                if (q.delta() < before + 1) throw InvariantBroken("sequence case 4: no progress");
            }
            bias_after(q, 0);
        } else {
            bias_after(q, 2);
        }
        return q;
    }

private:
    const Context& ctx_;
    std::size_t b_;
    blockio::OpScope scope_;
    bool seq_;
    std::unordered_set<blockio::RecordId> seen_ends_;

    R own(const R& r) {
        if (seen_ends_.insert(r->id).second) return r;
        R c = make(load(r), r->child);
        seen_ends_.insert(c->id);
        return c;
    }

    static void replace_first(P& p, const R& old_r, R r) {
        if (!p.clean.is_empty()) {
            p.clean = p.clean.with_first(std::move(r));
        } else if (!p.buffer.is_empty()) {
            p.buffer = p.buffer.with_first(std::move(r));
        } else {
            dirty_replace_first(p, old_r, std::move(r));
        }
    }

    static void replace_last(P& p, const R& old_r, R r) {
        if (!p.dirty.is_empty()) {
            dirty_replace_last(p, old_r, std::move(r));
        } else if (!p.buffer.is_empty()) {
            p.buffer = p.buffer.with_last(std::move(r));
        } else {
            p.clean = p.clean.with_last(std::move(r));
        }
    }
    Compare less_{};
};

// ---- validation -------------------------------------------------------------

template <typename T, typename Compare>
class Validator {
public:
    using P = Parts<T, Compare>;
    using R = Rec<T, Compare>;
    using Deque = PDeque<R>;

    explicit Validator(std::size_t b) : b_(b) {}

    void check(const std::shared_ptr<const P>& q, const std::string& path, std::vector<Violation>& out) {
        if (!q) return;
        if (!seen_parts_.insert(q.get()).second) return;
        keep_.push_back(q);
        check_parts(*q, path, out);
    }

private:
    bool lt(const T& a, const T& b) const { return less_(a, b); }

    void add(std::vector<Violation>& out, std::string inv, const std::string& path, std::string detail) {
        out.push_back({std::move(inv), path + detail});
    }

    std::string rec_desc(const R& r) const { return "record#" + std::to_string(r->id); }

    std::size_t check_record(const R& r, const std::string& path, std::vector<Violation>& out) {
        if (r->buf.empty()) {
            add(out, "shape", path, rec_desc(r) + " has an empty buffer");
            return 0;
        }
        if (seen_records_.insert(r->id).second) {
            for (std::size_t i = 1; i < r->buf.size(); ++i) {
                if (!lt(r->buf[i - 1], r->buf[i])) {
                    add(out, "I.2", path, rec_desc(r) + " buffer not strictly increasing at " + std::to_string(i));
                    break;
                }
            }
            if (r->size() > 5 * b_) add(out, "shape", path, rec_desc(r) + " exceeds 5b elements");
            if (r->child) {
                if (r->child->empty()) {
                    add(out, "shape", path, rec_desc(r) + " points to an empty queue");
                } else {
                    const auto& cmin = r->child->clean.is_empty() ? r->buf.back() : r->child->clean.first()->min();
                    if (!r->child->clean.is_empty() && !lt(r->max(), cmin))
                        add(out, "I.1", path, rec_desc(r) + " max(l) >= min(child)");
                    std::string cpath = path + rec_desc(r) + ".child/";
                    check(r->child, cpath, out);
                }
            }
            std::size_t expect = r->size() + (r->child ? r->child->elements() : 0);
            if (expect != r->total) add(out, "cache", path, rec_desc(r) + " total mismatch");
        }
        return r->total;
    }

    std::pair<std::size_t, std::size_t> check_deque(const Deque& d, const std::string& name, const std::string& path,
                                                    bool must_be_simple, std::vector<Violation>& out) {
        std::size_t elems = 0, n = 0;
        R prev;
        d.for_each([&](const R& r) {
            elems += check_record(r, path, out);
            ++n;
            if (must_be_simple && !r->simple())
                add(out, "I.5", path, name + " holds non-simple " + rec_desc(r));
            if (prev && !r->buf.empty() && !prev->buf.empty() && !lt(prev->max(), r->min()))
                add(out, "I.2", path, name + ": " + rec_desc(prev) + " max >= min of " + rec_desc(r));
            prev = r;
        });
        return {elems, n};
    }

    void check_parts(const P& q, const std::string& path, std::vector<Violation>& out) {
        auto [ce, cn] = check_deque(q.clean, "C", path, true, out);
        auto [be, bn] = check_deque(q.buffer, "B", path, true, out);
        std::size_t de = 0, dn = 0, i = 0;
        T dmin{};
        bool have_dmin = false;
        q.dirty.for_each([&](const Deque& d) {
            ++i;
            if (d.is_empty()) add(out, "shape", path, "D" + std::to_string(i) + " is empty");
            auto [e, n] = check_deque(d, "D" + std::to_string(i), path, false, out);
            de += e;
            dn += n;
        });
        if (ce != q.clean_elems || be != q.buffer_elems || de != q.dirty_elems || dn != q.dirty_records)
            add(out, "cache", path, "element/record counters disagree with contents");

        if (q.empty()) return;
        if (q.clean.is_empty()) {
            add(out, "shape", path, "nonempty queue with empty C");
            return;
        }
        // I.3
        if (!q.buffer.is_empty() && !lt(q.clean.last()->max(), q.buffer.first()->min()))
            add(out, "I.3", path, "max(last(C)) >= min(first(B))");
        if (!q.dirty.is_empty()) {
            const R d1 = q.dirty.first().first();
            if (!q.buffer.is_empty() && !lt(q.buffer.first()->min(), d1->min()))
                add(out, "I.3", path, "min(first(B)) >= min(first(D1))");
            if (q.buffer.is_empty() && !lt(q.clean.last()->max(), d1->min()))
                add(out, "I.3", path, "max(last(C)) >= min(first(D1))");
            // I.4
            dmin = d1->min();
            have_dmin = true;
            q.dirty.for_each([&](const Deque& d) {
                d.for_each([&](const R& r) {
                    if (have_dmin && lt(r->min(), dmin))
                        add(out, "I.4", path, rec_desc(r) + " is below min(first(D1))");
                });
            });
            // I.8
            const R last = q.dirty.last().last();
            if (last->size() < b_ && !last->simple())
                add(out, "I.8", path, "last(D_k) below b elements but not simple");
        }
        if (!q.buffer.is_empty() && q.dirty.is_empty())
            add(out, "shape", path, "B nonempty without dirty deques");
        // I.6
        if (q.delta() < 0) add(out, "I.6", path, "Delta = " + std::to_string(q.delta()));
        // I.7
        const bool first_small = q.clean.first()->size() < b_;
        const bool queue_small = q.elements() < b_;
        if (first_small != queue_small)
            add(out, "I.7", path, "|first(C)| < b is " + std::string(first_small ? "true" : "false") +
                                      " but |Q| < b is " + (queue_small ? "true" : "false"));
        if (path.empty() && !queue_small && q.clean.size() >= 2 && q.clean.at(1)->size() < b_ &&
            q.clean.at(1) != q.last_record())
            add(out, "shape", path, "first(rest(C)) below b elements");
        if (queue_small && (q.top_records() != 1 || !q.clean.first()->simple()))
            add(out, "shape", path, "small queue is not one simple record");
    }

    std::size_t b_;
    Compare less_{};
    std::unordered_set<const void*> seen_parts_;
    std::unordered_set<blockio::RecordId> seen_records_;
    std::vector<std::shared_ptr<const P>> keep_;
};

}  // namespace detail

// ---- public operations --------------------------------------------------------

template <typename T, typename Compare>
Queue<T, Compare> Queue<T, Compare>::singleton(ContextPtr ctx, T e) {
    detail::Engine<T, Compare> eng(*ctx);
    Parts p;
    eng.clean_push_back(p, eng.make(detail::Buffer<T>(std::vector<T>{std::move(e)}), nullptr));
    auto pp = eng.freeze(std::move(p));
    eng.finish({pp});
    return Queue(std::move(ctx), std::move(pp));
}

/// Minimum element. Throws EmptyQueue.
template <typename T, typename Compare>
const T& find_min(const Queue<T, Compare>& q) {
    if (q.is_empty()) throw EmptyQueue("find_min");
    return q.parts()->clean.first()->min();
}

/// Removes the minimum; returns it together with the new version.
template <typename T, typename Compare>
std::pair<T, Queue<T, Compare>> delete_min(const Queue<T, Compare>& q) {
    if (q.is_empty()) throw EmptyQueue("delete_min");
    detail::Engine<T, Compare> eng(*q.context());
    eng.note_inputs(q.parts());
    auto [e, p] = eng.delete_min(*q.parts());
    auto pp = eng.freeze(std::move(p));
    eng.finish({pp});
    return {std::move(e), Queue<T, Compare>(q.context(), std::move(pp))};
}

/// {e in q1 | e < min(q2)} followed by q2.
template <typename T, typename Compare>
Queue<T, Compare> catenate_and_attrite(const Queue<T, Compare>& q1, const Queue<T, Compare>& q2) {
    if (q1.context() != q2.context()) throw ConfigMismatch();
    if (q2.is_empty()) return q1;
    if (q1.is_empty()) return q2;
    detail::Engine<T, Compare> eng(*q1.context());
    eng.note_inputs(q1.parts());
    eng.note_inputs(q2.parts());
    auto p1 = eng.adopt(q1.parts());
    auto p = eng.catenate(std::move(p1), eng.adopt(q2.parts()));
    eng.normalize(p);
    auto pp = eng.freeze(std::move(p));
    eng.finish({pp});
    return Queue<T, Compare>(q1.context(), std::move(pp));
}

/// Appends e and attrites every element not smaller than e.
template <typename T, typename Compare>
Queue<T, Compare> insert_and_attrite(const Queue<T, Compare>& q, std::type_identity_t<T> e) {
    detail::Engine<T, Compare> eng(*q.context());
    eng.note_inputs(q.parts());
    typename Queue<T, Compare>::Parts single;
    eng.clean_push_back(single, eng.make(detail::Buffer<T>(std::vector<T>{std::move(e)}), nullptr));
    auto p = q.is_empty() ? std::move(single) : eng.catenate(*q.parts(), std::move(single));
    eng.normalize(p);
    auto pp = eng.freeze(std::move(p));
    eng.finish({pp});
    return Queue<T, Compare>(q.context(), std::move(pp));
}

/// One Bias step: Delta improves by at least one. No-op when q has neither
/// buffer nor dirty records.
template <typename T, typename Compare>
Queue<T, Compare> bias(const Queue<T, Compare>& q) {
    if (q.is_empty() || !q.parts()->biasable()) return q;
    detail::Engine<T, Compare> eng(*q.context());
    eng.note_inputs(q.parts());
    auto p = *q.parts();
    eng.bias(p);
    eng.normalize(p);
    auto pp = eng.freeze(std::move(p));
    eng.finish({pp});
    return Queue<T, Compare>(q.context(), std::move(pp));
}

/// Delta(Q) = |C| - sum |D_i| - k + 1.
template <typename T, typename Compare>
long delta(const Queue<T, Compare>& q) {
    return q.parts() ? q.parts()->delta() : 1;
}

/// Records in C, B and the dirty deques (children not included).
template <typename T, typename Compare>
std::size_t top_level_records(const Queue<T, Compare>& q) {
    return q.parts() ? q.parts()->top_records() : 0;
}

/// Distinct records reachable from q, children included.
template <typename T, typename Compare>
std::size_t record_count(const Queue<T, Compare>& q) {
    using P = typename Queue<T, Compare>::Parts;
    using R = typename Queue<T, Compare>::Record;
    std::unordered_set<blockio::RecordId> seen;
    std::unordered_set<const P*> seen_parts;
    std::vector<const P*> stack;
    if (q.parts()) stack.push_back(q.parts().get());
    while (!stack.empty()) {
        const P* p = stack.back();
        stack.pop_back();
        if (!seen_parts.insert(p).second) continue;
        auto visit = [&](const R& r) {
            if (seen.insert(r->id).second && r->child) stack.push_back(r->child.get());
        };
        p->clean.for_each(visit);
        p->buffer.for_each(visit);
        p->dirty.for_each([&](const auto& d) { d.for_each(visit); });
    }
    return seen.size();
}

/// Phi_F and Phi_L of the amortisation argument.
inline double potential_first(std::size_t x, std::size_t b) {
    const double xb = static_cast<double>(x) / static_cast<double>(b);
    if (x < 2 * b) return 3.0 - xb;
    if (x < 3 * b) return 1.0;
    return 2.0 * xb - 5.0;
}

inline double potential_last(std::size_t x, std::size_t b) {
    if (x < 4 * b) return 0.0;
    return 3.0 * static_cast<double>(x) / static_cast<double>(b) - 12.0;
}

/// Potential Phi(Q); diagnostic only.
template <typename T, typename Compare>
double potential(const Queue<T, Compare>& q) {
    const std::size_t b = q.context()->b();
    const std::size_t n = q.stored_elements();
    if (n == 0) return 0.0;
    if (n < b) return 3.0 * static_cast<double>(n) / static_cast<double>(b);
    const auto& p = *q.parts();
    auto first = p.first_record();
    auto last = p.last_record();
    std::size_t total = record_count(q);
    auto subtree = [&](const auto& r) {
        Queue<T, Compare> child(q.context(), r->child);
        return child.is_empty() ? std::size_t{0} : record_count(child);
    };
    std::size_t excluded = 1 + subtree(first);
    if (last != first) excluded += 1 + subtree(last);
    std::size_t middle = total > excluded ? total - excluded : 0;
    double phi = potential_first(first->size(), b) + static_cast<double>(middle);
    if (last != first) phi += potential_last(last->size(), b);
    return phi;
}

/// Critical records: first(C), first(rest(C)), last(C), first(B), first(D_1),
/// last(D_k), and last(front(D_k)) or else last(D_{k-1}); with no dirty
/// deques, last(front(C)). Deduplicated.
template <typename T, typename Compare>
std::vector<typename Queue<T, Compare>::Record> critical_records(const Queue<T, Compare>& q) {
    using R = typename Queue<T, Compare>::Record;
    std::vector<R> out;
    if (q.is_empty()) return out;
    const auto& p = *q.parts();
    auto add = [&](const R& r) {
        if (!r) return;
        for (const auto& x : out)
            if (x == r) return;
        out.push_back(r);
    };
    if (!p.clean.is_empty()) {
        add(p.clean.first());
        if (p.clean.size() >= 2) add(p.clean.at(1));
        add(p.clean.last());
        // Without dirty deques the record before last(Q) sits in C.
        if (p.dirty.is_empty() && p.clean.size() >= 2) add(p.clean.at(p.clean.size() - 2));
    }
    if (!p.buffer.is_empty()) add(p.buffer.first());
    if (!p.dirty.is_empty()) {
        add(p.dirty.first().first());
        const auto& dk = p.dirty.last();
        add(dk.last());
        if (dk.size() >= 2) {
            add(dk.at(dk.size() - 2));
        } else if (p.dirty.size() >= 2) {
            add(p.dirty.at(p.dirty.size() - 2).last());
        }
    }
    return out;
}

template <typename T, typename Compare>
std::vector<blockio::RecordHandle> critical_handles(const Queue<T, Compare>& q) {
    std::vector<blockio::RecordHandle> out;
    for (const auto& r : critical_records(q)) out.push_back({r->id, r->words});
    return out;
}

/**
 * CatenateAndAttrite of Q_1..Q_l, folded right to left. Each nonempty Q_i
 * must be in state >= 2 (>= 1 when it holds a single record). Input end
 * records are not assumed resident: with all critical records pinned, the
 * fold, including the Bias steps it takes on the accumulated result,
 * performs no unpinned reads.
 */
template <typename T, typename Compare>
Queue<T, Compare> concat_sequence(std::span<const Queue<T, Compare>> queues) {
    if (queues.empty()) throw std::invalid_argument("concat_sequence: no queues");
    const auto& ctx = queues.front().context();
    for (std::size_t i = 0; i < queues.size(); ++i) {
        const auto& q = queues[i];
        if (q.context() != ctx) throw ConfigMismatch();
        if (q.is_empty()) continue;
        const long state = delta(q);
        const bool single = top_level_records(q) == 1;
        if (state < 2 && !(single && state >= 1)) throw PreconditionViolated(i, state);
    }
    if (queues.size() == 1) return queues.front();
    auto policy = blockio::PolicyGuard::current();
    policy.ends_resident = false;
    blockio::PolicyGuard guard(policy);
    detail::Engine<T, Compare> eng(*ctx, /*sequence_mode=*/true);
    typename Queue<T, Compare>::Parts acc;
    if (queues.back().parts()) acc = eng.adopt(queues.back().parts());
    for (std::size_t i = queues.size() - 1; i-- > 0;) {
        if (queues[i].is_empty()) continue;
        acc = eng.catenate(eng.adopt(queues[i].parts()), std::move(acc));
        eng.normalize(acc);
    }
    auto pp = eng.freeze(std::move(acc));
    eng.finish({pp});
    return Queue<T, Compare>(ctx, std::move(pp));
}

template <typename T, typename Compare>
Queue<T, Compare> concat_sequence(const std::vector<Queue<T, Compare>>& queues) {
    return concat_sequence(std::span<const Queue<T, Compare>>(queues));
}

/// Invariant violations of q and everything reachable from it; empty when valid.
template <typename T, typename Compare>
std::vector<Violation> validate(const Queue<T, Compare>& q) {
    std::vector<Violation> out;
    detail::Validator<T, Compare> v(q.context()->b());
    v.check(q.parts(), "", out);
    return out;
}

/// Reusable validator that skips sub-structures it has already checked.
template <typename T, typename Compare = std::less<T>>
class IncrementalValidator {
public:
    explicit IncrementalValidator(std::size_t b) : v_(b) {}
    std::vector<Violation> operator()(const Queue<T, Compare>& q) {
        std::vector<Violation> out;
        v_.check(q.parts(), "", out);
        return out;
    }

private:
    detail::Validator<T, Compare> v_;
};

/// All surviving elements in increasing order, by repeated DeleteMin.
template <typename T, typename Compare>
std::vector<T> drain(const Queue<T, Compare>& q) {
    std::vector<T> out;
    Queue<T, Compare> cur = q;
    while (!cur.is_empty()) {
        auto [e, next] = delete_min(cur);
        out.push_back(std::move(e));
        cur = std::move(next);
    }
    return out;
}

/// `C: [(lo..hi,n=..,child=..)|...]` one line per deque.
template <typename T, typename Compare, typename Fmt>
std::string dump(const Queue<T, Compare>& q, Fmt&& fmt) {
    std::ostringstream os;
    using R = typename Queue<T, Compare>::Record;
    auto line = [&](const std::string& name, const auto& d) {
        os << name << ": [";
        bool first = true;
        d.for_each([&](const R& r) {
            if (!first) os << '|';
            first = false;
            os << '(' << fmt(r->min()) << ".." << fmt(r->max()) << ",n=" << r->size() << ",child=";
            if (r->child)
                os << r->id;
            else
                os << '-';
            os << ')';
        });
        os << "]\n";
    };
    if (!q.parts()) {
        os << "C: []\nB: []\n";
        return os.str();
    }
    line("C", q.parts()->clean);
    line("B", q.parts()->buffer);
    std::size_t i = 0;
    q.parts()->dirty.for_each([&](const auto& d) { line("D" + std::to_string(++i), d); });
    return os.str();
}

template <typename T, typename Compare>
std::string dump(const Queue<T, Compare>& q) {
    return dump(q, [](const T& x) {
        std::ostringstream s;
        s << x;
        return s.str();
    });
}

}  // namespace iocpqa
