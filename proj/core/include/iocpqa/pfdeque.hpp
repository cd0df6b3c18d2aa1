#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iocpqa {

class EmptyDeque : public std::out_of_range {
public:
    explicit EmptyDeque(const char* op)
        : std::out_of_range(std::string("PDeque::") + op + " on empty deque") {}
};

/**
 * Persistent catenable deque.
 *
 * Every version is an immutable value; push/inject/pop/eject/catenate return
 * new versions and leave their inputs intact, so versions can be freely
 * shared and combined (confluent persistence). The spine is a height-balanced
 * binary tree of shared immutable nodes, so all end operations and
 * catenation run in O(log n) worst case and allocate O(log n) nodes.
 *
 * Copying a PDeque copies one shared_ptr.
 */
template <typename T>
class PDeque {
    struct Node;
    using Ptr = std::shared_ptr<const Node>;

    struct Node {
        T value;
        Ptr left;
        Ptr right;
        std::uint32_t height;
        std::size_t size;

        Node(Ptr l, T v, Ptr r)
            : value(std::move(v)),
              left(std::move(l)),
              right(std::move(r)),
              height(1 + std::max(height_of(left), height_of(right))),
              size(1 + size_of(left) + size_of(right)) {}
    };

public:
    using value_type = T;

    PDeque() = default;

    static PDeque empty() { return PDeque(); }

    bool is_empty() const noexcept { return root_ == nullptr; }
    std::size_t size() const noexcept { return size_of(root_); }

    /// Insert at the head.
    PDeque push(T x) const { return PDeque(join(nullptr, std::move(x), root_)); }
    /// Insert at the tail.
    PDeque inject(T x) const { return PDeque(join(root_, std::move(x), nullptr)); }

    /// Remove the head; returns the head item and the remaining version.
    std::pair<T, PDeque> pop() const {
        if (!root_) throw EmptyDeque("pop");
        auto [x, rest] = split_first(root_);
        return {std::move(x), PDeque(std::move(rest))};
    }

    /// Remove the tail; returns the tail item and the remaining version.
    std::pair<T, PDeque> eject() const {
        if (!root_) throw EmptyDeque("eject");
        auto [init, x] = split_last(root_);
        return {std::move(x), PDeque(std::move(init))};
    }

    static PDeque catenate(const PDeque& a, const PDeque& b) {
        if (!a.root_) return b;
        if (!b.root_) return a;
        auto [init, x] = split_last(a.root_);
        return PDeque(join(std::move(init), std::move(x), b.root_));
    }

    const T& first() const {
        if (!root_) throw EmptyDeque("first");
        const Node* n = root_.get();
        while (n->left) n = n->left.get();
        return n->value;
    }

    const T& last() const {
        if (!root_) throw EmptyDeque("last");
        const Node* n = root_.get();
        while (n->right) n = n->right.get();
        return n->value;
    }

    /// All items but the head.
    PDeque rest() const {
        if (!root_) throw EmptyDeque("rest");
        return PDeque(split_first(root_).second);
    }

    /// All items but the tail.
    PDeque front() const {
        if (!root_) throw EmptyDeque("front");
        return PDeque(split_last(root_).first);
    }

    /// Positional access, O(log n).
    const T& at(std::size_t i) const {
        if (i >= size()) throw std::out_of_range("PDeque::at");
        const Node* n = root_.get();
        for (;;) {
            std::size_t ls = size_of(n->left);
            if (i < ls) {
                n = n->left.get();
            } else if (i == ls) {
                return n->value;
            } else {
                i -= ls + 1;
                n = n->right.get();
            }
        }
    }

    /// Replace the head item.
    PDeque with_first(T x) const { return rest().push(std::move(x)); }
    /// Replace the tail item.
    PDeque with_last(T x) const { return front().inject(std::move(x)); }

    template <typename F>
    void for_each(F&& f) const {
        std::vector<const Node*> stack;
        const Node* n = root_.get();
        while (n || !stack.empty()) {
            while (n) {
                stack.push_back(n);
                n = n->left.get();
            }
            n = stack.back();
            stack.pop_back();
            f(n->value);
            n = n->right.get();
        }
    }

    std::vector<T> to_vector() const {
        std::vector<T> out;
        out.reserve(size());
        for_each([&](const T& x) { out.push_back(x); });
        return out;
    }

    static PDeque from_range(const std::vector<T>& items) {
        return PDeque(build(items, 0, items.size()));
    }

    /// Identity of the version, for structure-sharing checks.
    const void* identity() const noexcept { return root_.get(); }

    std::uint32_t height() const noexcept { return height_of(root_); }

private:
    explicit PDeque(Ptr root) : root_(std::move(root)) {}

    static std::uint32_t height_of(const Ptr& p) noexcept { return p ? p->height : 0; }
    static std::size_t size_of(const Ptr& p) noexcept { return p ? p->size : 0; }

    static Ptr make(Ptr l, T v, Ptr r) {
        return std::make_shared<const Node>(std::move(l), std::move(v), std::move(r));
    }

    static Ptr rotate_left(const Ptr& l, const T& v, const Ptr& r) {
        // r is the heavy child.
        return make(make(l, v, r->left), r->value, r->right);
    }

    static Ptr rotate_right(const Ptr& l, const T& v, const Ptr& r) {
        return make(l->left, l->value, make(l->right, v, r));
    }

    // Node over children whose heights differ by at most 2.
    static Ptr balance(Ptr l, T v, Ptr r) {
        const auto hl = height_of(l);
        const auto hr = height_of(r);
        if (hr > hl + 1) {
            if (height_of(r->left) > height_of(r->right)) {
                const Ptr& rl = r->left;
                return make(make(std::move(l), std::move(v), rl->left), rl->value,
                            make(rl->right, r->value, r->right));
            }
            return rotate_left(l, v, r);
        }
        if (hl > hr + 1) {
            if (height_of(l->right) > height_of(l->left)) {
                const Ptr& lr = l->right;
                return make(make(l->left, l->value, lr->left), lr->value,
                            make(lr->right, std::move(v), std::move(r)));
            }
            return rotate_right(l, v, r);
        }
        return make(std::move(l), std::move(v), std::move(r));
    }

    static Ptr join_right(const Ptr& l, T v, const Ptr& r) {
        if (height_of(l) <= height_of(r) + 1) return make(l, std::move(v), r);
        return balance(l->left, l->value, join_right(l->right, std::move(v), r));
    }

    static Ptr join_left(const Ptr& l, T v, const Ptr& r) {
        if (height_of(r) <= height_of(l) + 1) return make(l, std::move(v), r);
        return balance(join_left(l, std::move(v), r->left), r->value, r->right);
    }

    static Ptr join(const Ptr& l, T v, const Ptr& r) {
        if (height_of(l) > height_of(r) + 1) return join_right(l, std::move(v), r);
        if (height_of(r) > height_of(l) + 1) return join_left(l, std::move(v), r);
        return make(l, std::move(v), r);
    }

    static std::pair<T, Ptr> split_first(const Ptr& n) {
        if (!n->left) return {n->value, n->right};
        auto [x, l] = split_first(n->left);
        return {std::move(x), join(l, n->value, n->right)};
    }

    static std::pair<Ptr, T> split_last(const Ptr& n) {
        if (!n->right) return {n->left, n->value};
        auto [r, x] = split_last(n->right);
        return {join(n->left, n->value, r), std::move(x)};
    }

    static Ptr build(const std::vector<T>& items, std::size_t lo, std::size_t hi) {
        if (lo >= hi) return nullptr;
        std::size_t mid = lo + (hi - lo) / 2;
        return make(build(items, lo, mid), items[mid], build(items, mid + 1, hi));
    }

    Ptr root_;
};

}  // namespace iocpqa
