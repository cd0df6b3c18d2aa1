#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iocpqa/blockio.hpp"
#include "iocpqa/cpqa.hpp"

namespace iocpqa::skyline {

using Coord = std::int64_t;

struct Point {
    Coord x = 0;
    Coord y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

std::ostream& operator<<(std::ostream& os, const Point& p);

/// Queue key of a point: larger y first, ties broken by smaller x. A later
/// (larger x) point attrites an earlier one exactly when its y is larger.
struct SkylineKey {
    Coord y = 0;
    Coord x = 0;

    Point point() const noexcept { return {x, y}; }
    static SkylineKey of(const Point& p) noexcept { return {p.y, p.x}; }

    friend bool operator==(const SkylineKey&, const SkylineKey&) = default;
    friend bool operator<(const SkylineKey& a, const SkylineKey& b) noexcept {
        return a.y != b.y ? a.y > b.y : a.x < b.x;
    }
};

std::ostream& operator<<(std::ostream& os, const SkylineKey& k);

using SkyQueue = Queue<SkylineKey>;

/// [x_lo, x_hi] x [y_lo, +inf), all bounds closed.
struct QueryRange3 {
    Coord x_lo = 0;
    Coord x_hi = 0;
    Coord y_lo = 0;
};

struct IndexConfig {
    std::size_t B = 64;
    std::size_t M = std::size_t{1} << 24;
    double epsilon = 1.0 / 3.0;
    std::size_t leaf = 0;  // k override; 0 derives it from B and epsilon

    /// Branching parameter a = max(2, round(2 B^eps)).
    std::size_t a() const;
    /// Leaf capacity k = b = max(1, round(B^(1-eps))), or `leaf` when set.
    std::size_t k() const;
    /// Throws blockio::InvalidConfig on B < 1, B > M, eps outside [0, 1] or k > B.
    void check() const;
};

class DuplicateX : public std::invalid_argument {
public:
    explicit DuplicateX(Coord x);
};

class NotFound : public std::invalid_argument {
public:
    explicit NotFound(const Point& p);
};

struct SkylineViolation {
    std::string kind;  // "shape", "queue", "state", "drain", "stale-rep"
    std::string detail;
};

struct Node;

/**
 * Dynamic planar 3-sided skyline index.
 *
 * An (a,2a)-tree over x with leaves of at most k points. Every node holds a
 * queue version whose surviving elements are the maximal points of its
 * subtree, and every internal node keeps a representative block with the
 * critical records of each child's queue. Single writer, many readers.
 */
class Index {
public:
    explicit Index(IndexConfig cfg, std::shared_ptr<blockio::IoModel> io = nullptr);
    ~Index();
    Index(Index&&) noexcept;
    Index& operator=(Index&&) noexcept;
    Index(const Index&) = delete;
    Index& operator=(const Index&) = delete;

    /// Bottom-up construction. Throws DuplicateX.
    static Index build(IndexConfig cfg, std::vector<Point> points,
                       std::shared_ptr<blockio::IoModel> io = nullptr);

    /// Throws DuplicateX when p.x is already stored.
    void insert(const Point& p);
    /// Throws NotFound unless p is stored exactly.
    void remove(const Point& p);

    /// Maximal points of the range, by increasing x.
    std::vector<Point> query3(const QueryRange3& r) const;
    /// Maximal points of the whole set, by increasing x.
    std::vector<Point> report_all() const;

    /// Full consistency check. Drains are compared against brute force only
    /// when the index holds at most `drain_limit` points.
    std::vector<SkylineViolation> check(std::size_t drain_limit = 4096) const;

    std::size_t size() const noexcept { return size_; }
    std::size_t height() const;
    const IndexConfig& config() const noexcept { return cfg_; }
    const ContextPtr& context() const noexcept { return ctx_; }
    blockio::IoModel* io() const noexcept { return ctx_->io(); }

    /// Queue identities of all nodes in preorder; equal before and after
    /// any read-only call.
    std::vector<const void*> version_handles() const;
    /// Drain of every node's queue in preorder.
    std::vector<std::vector<Point>> node_drains() const;
    /// Leaf sizes and internal degrees in preorder, for shape comparisons.
    std::vector<std::size_t> shape() const;

    /// Test hook: replaces one representative-block entry with a stale one.
    /// No-op while the root is a leaf.
    void debug_corrupt_rep_block();

private:
    IndexConfig cfg_;
    ContextPtr ctx_;
    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;
};

/// Malformed point file or query script.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// `x y` per line; blank lines and `#` comments ignored.
std::vector<Point> parse_points(std::istream& in);

struct ScriptCommand {
    enum class Kind { Insert, Delete, Query, ReportAll, Check } kind;
    Coord a = 0, b = 0, c = 0;
};

/// Lines `I x y`, `D x y`, `Q xlo xhi ylo`, `A`, `C`.
std::vector<ScriptCommand> parse_script(std::istream& in);

/// Space separated `x:y` pairs.
std::string format_points(const std::vector<Point>& pts);

/// Thrown by run_script when `C` finds violations.
class CheckFailed : public std::runtime_error {
public:
    explicit CheckFailed(const SkylineViolation& v);
};

/// Executes commands in order, one output line per Q or A. Throws DuplicateX,
/// NotFound or CheckFailed on the first semantic error.
void run_script(Index& idx, const std::vector<ScriptCommand>& cmds, std::ostream& out);

}  // namespace iocpqa::skyline
