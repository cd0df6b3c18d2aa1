#include "iocpqa/skyline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

namespace iocpqa::skyline {

std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.x << ':' << p.y; }

std::ostream& operator<<(std::ostream& os, const SkylineKey& k) { return os << k.x << ':' << k.y; }

std::size_t IndexConfig::a() const {
    const double v = std::round(2.0 * std::pow(static_cast<double>(B), epsilon));
    return std::max<std::size_t>(2, static_cast<std::size_t>(v));
}

std::size_t IndexConfig::k() const {
    if (leaf != 0) return leaf;
    const double v = std::round(std::pow(static_cast<double>(B), 1.0 - epsilon));
    return std::max<std::size_t>(1, static_cast<std::size_t>(v));
}

void IndexConfig::check() const {
    if (B < 1) throw blockio::InvalidConfig("IndexConfig: B must be positive");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw blockio::InvalidConfig("IndexConfig: epsilon outside [0, 1]");
    if (B > M) throw blockio::InvalidConfig("IndexConfig: B exceeds M");
    if (k() > B) throw blockio::InvalidConfig("IndexConfig: leaf capacity exceeds B");
}

DuplicateX::DuplicateX(Coord x) : std::invalid_argument("duplicate x-coordinate " + std::to_string(x)) {}

NotFound::NotFound(const Point& p)
    : std::invalid_argument("point " + std::to_string(p.x) + ":" + std::to_string(p.y) + " not stored") {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

CheckFailed::CheckFailed(const SkylineViolation& v) : std::runtime_error("check: " + v.kind + ": " + v.detail) {}

struct Node {
    bool leaf = true;
    std::vector<Point> pts;  // leaf only, by increasing x
    std::vector<std::unique_ptr<Node>> kids;
    SkyQueue queue;
    // Critical records of each child's queue version, as pinned by queries.
    std::vector<std::vector<blockio::RecordHandle>> rep;
    std::size_t rep_words = 0;
    Coord lo = 0;
    std::size_t count = 0;

    std::size_t degree() const noexcept { return kids.size(); }
    // Words of the node's own block: points, or keys plus pointers and the
    // representative block.
    std::size_t words() const noexcept { return leaf ? 2 * pts.size() : 2 * kids.size() + rep_words; }
};

namespace {

using blockio::RecordHandle;

std::size_t half_up(std::size_t k) { return (k + 1) / 2; }

/// Sizes of `groups` nearly equal parts of n.
std::vector<std::size_t> split_even(std::size_t n, std::size_t groups) {
    std::vector<std::size_t> out(groups, n / groups);
    for (std::size_t i = 0; i < n % groups; ++i) ++out[i];
    return out;
}

/// Part sizes for bottom-up packing: close to `target`, each in [lo, hi]
/// unless a single part holds everything.
std::vector<std::size_t> pack(std::size_t n, std::size_t target, std::size_t lo, std::size_t hi) {
    if (n <= hi) return {n};
    std::size_t g = (n + target - 1) / target;
    const std::size_t g_min = (n + hi - 1) / hi;
    while (g > g_min && n / g < lo) --g;
    return split_even(n, g);
}

bool same_handles(const std::vector<RecordHandle>& a, const std::vector<RecordHandle>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].id != b[i].id || a[i].words != b[i].words) return false;
    return true;
}

std::vector<Point> to_points(const std::vector<SkylineKey>& keys) {
    std::vector<Point> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(k.point());
    return out;
}

/// Charge-free drain for diagnostics.
std::vector<Point> quiet_drain(const SkyQueue& q) {
    auto policy = blockio::PolicyGuard::current();
    policy.charge = false;
    blockio::PolicyGuard guard(policy);
    return to_points(drain(q));
}

/// Maximal points of an x-sorted sequence, by one right-to-left scan.
std::vector<Point> scan_maxima(const std::vector<Point>& pts) {
    std::vector<Point> out;
    bool have = false;
    Coord best = 0;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        if (!have || it->y >= best) {
            out.push_back(*it);
            if (!have || it->y > best) best = it->y;
            have = true;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void collect_points(const Node& v, std::vector<Point>& out) {
    if (v.leaf) {
        out.insert(out.end(), v.pts.begin(), v.pts.end());
        return;
    }
    for (const auto& c : v.kids) collect_points(*c, out);
}

std::size_t route(const Node& v, Coord x) {
    std::size_t i = 0;
    while (i + 1 < v.kids.size() && v.kids[i + 1]->lo <= x) ++i;
    return i;
}

class Builder {
public:
    Builder(const IndexConfig& cfg, const ContextPtr& ctx) : a_(cfg.a()), k_(cfg.k()), ctx_(ctx) {}

    std::size_t a() const noexcept { return a_; }
    std::size_t k() const noexcept { return k_; }

    void load(const Node& v) const {
        if (auto* io = ctx_->io()) io->charge_record_load(v.words());
    }

    /// Rebuilds v's queue (and representative block) from its points or
    /// children, then stores the node.
    void recompute(Node& v) const {
        if (v.leaf) {
            SkyQueue q = SkyQueue::empty(ctx_);
            for (const auto& p : v.pts) q = insert_and_attrite(q, SkylineKey::of(p));
            v.queue = settle(std::move(q));
            v.count = v.pts.size();
            v.lo = v.pts.empty() ? 0 : v.pts.front().x;
        } else {
            std::vector<SkyQueue> qs;
            qs.reserve(v.kids.size());
            v.rep.clear();
            v.rep_words = 0;
            v.count = 0;
            blockio::PinGuard pins(ctx_->io(), {});
            for (const auto& c : v.kids) {
                qs.push_back(c->queue);
                auto hs = critical_handles(c->queue);
                for (const auto& h : hs) {
                    pins.add(h);
                    v.rep_words += h.words;
                }
                v.rep.push_back(std::move(hs));
                v.count += c->count;
            }
            v.queue = settle(concat_sequence(qs));
            v.lo = v.kids.front()->lo;
        }
        if (auto* io = ctx_->io()) io->charge_record_store(v.words());
    }

private:
    /// Bias until the queue can take part in a sequence concatenation.
    static SkyQueue settle(SkyQueue q) {
        int rounds = 0;
        while (delta(q) < 2 && top_level_records(q) > 1) {
            if (++rounds > 4) throw InvariantBroken("skyline: queue state did not reach 2 within 4 Bias calls");
            SkyQueue next = bias(q);
            if (next.identity() == q.identity()) break;
            q = std::move(next);
        }
        return q;
    }

    std::size_t a_;
    std::size_t k_;
    ContextPtr ctx_;
};

std::unique_ptr<Node> make_leaf(std::vector<Point> pts) {
    auto n = std::make_unique<Node>();
    n->leaf = true;
    n->pts = std::move(pts);
    return n;
}

std::unique_ptr<Node> make_internal(std::vector<std::unique_ptr<Node>> kids) {
    auto n = std::make_unique<Node>();
    n->leaf = false;
    n->kids = std::move(kids);
    return n;
}

/// Moves the upper half of v's points or children into a new right sibling.
std::unique_ptr<Node> split_node(Node& v) {
    if (v.leaf) {
        const std::size_t keep = half_up(v.pts.size());
        std::vector<Point> right(v.pts.begin() + static_cast<std::ptrdiff_t>(keep), v.pts.end());
        v.pts.resize(keep);
        return make_leaf(std::move(right));
    }
    const std::size_t keep = half_up(v.kids.size());
    std::vector<std::unique_ptr<Node>> right;
    for (std::size_t i = keep; i < v.kids.size(); ++i) right.push_back(std::move(v.kids[i]));
    v.kids.resize(keep);
    return make_internal(std::move(right));
}

std::unique_ptr<Node> insert_rec(const Builder& bld, Node& v, const Point& p) {
    bld.load(v);
    if (v.leaf) {
        auto it = std::lower_bound(v.pts.begin(), v.pts.end(), p.x, [](const Point& q, Coord x) { return q.x < x; });
        if (it != v.pts.end() && it->x == p.x) throw DuplicateX(p.x);
        v.pts.insert(it, p);
    } else {
        const std::size_t i = route(v, p.x);
        if (auto sib = insert_rec(bld, *v.kids[i], p)) {
            v.kids.insert(v.kids.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(sib));
        }
    }
    const std::size_t cap = v.leaf ? bld.k() : 2 * bld.a();
    const std::size_t n = v.leaf ? v.pts.size() : v.kids.size();
    if (n <= cap) {
        bld.recompute(v);
        return nullptr;
    }
    auto sib = split_node(v);
    bld.recompute(v);
    bld.recompute(*sib);
    return sib;
}

/// Repairs underflowing child i of v by fusing with or sharing from a sibling.
void fix_child(const Builder& bld, Node& v, std::size_t i) {
    const std::size_t j = i + 1 < v.kids.size() ? i + 1 : i - 1;
    const std::size_t l = std::min(i, j);
    const std::size_t r = std::max(i, j);
    Node& L = *v.kids[l];
    Node& R = *v.kids[r];
    bld.load(*v.kids[j]);
    if (L.leaf) {
        std::vector<Point> all = std::move(L.pts);
        all.insert(all.end(), R.pts.begin(), R.pts.end());
        if (all.size() <= bld.k()) {
            L.pts = std::move(all);
            v.kids.erase(v.kids.begin() + static_cast<std::ptrdiff_t>(r));
            bld.recompute(L);
            return;
        }
        const std::size_t keep = half_up(all.size());
        L.pts.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
        R.pts.assign(all.begin() + static_cast<std::ptrdiff_t>(keep), all.end());
    } else {
        std::vector<std::unique_ptr<Node>> all = std::move(L.kids);
        for (auto& c : R.kids) all.push_back(std::move(c));
        if (all.size() <= 2 * bld.a()) {
            L.kids = std::move(all);
            v.kids.erase(v.kids.begin() + static_cast<std::ptrdiff_t>(r));
            bld.recompute(L);
            return;
        }
        const std::size_t keep = half_up(all.size());
        L.kids.clear();
        R.kids.clear();
        for (std::size_t t = 0; t < all.size(); ++t) (t < keep ? L.kids : R.kids).push_back(std::move(all[t]));
    }
    bld.recompute(L);
    bld.recompute(R);
}

/// Returns true when v underflows after the removal.
bool remove_rec(const Builder& bld, Node& v, const Point& p) {
    bld.load(v);
    if (v.leaf) {
        auto it = std::lower_bound(v.pts.begin(), v.pts.end(), p.x, [](const Point& q, Coord x) { return q.x < x; });
        if (it == v.pts.end() || !(*it == p)) throw NotFound(p);
        v.pts.erase(it);
        bld.recompute(v);
        return v.pts.size() < half_up(bld.k());
    }
    const std::size_t i = route(v, p.x);
    if (remove_rec(bld, *v.kids[i], p) && v.kids.size() > 1) fix_child(bld, v, i);
    bld.recompute(v);
    return v.kids.size() < bld.a();
}

struct Path {
    std::vector<const Node*> nodes;  // root .. leaf
    std::vector<std::size_t> index;  // child taken at each internal node
};

Path descend(const Node* v, Coord x) {
    Path p;
    while (true) {
        p.nodes.push_back(v);
        if (v->leaf) break;
        const std::size_t i = route(*v, x);
        p.index.push_back(i);
        v = v->kids[i].get();
    }
    return p;
}

void check_rec(const Node& v, const Builder& bld, bool is_root, std::size_t depth, std::size_t& leaf_depth,
               std::vector<SkylineViolation>& out, std::size_t drain_limit, std::size_t total) {
    auto fail = [&](std::string kind, std::string detail) { out.push_back({std::move(kind), std::move(detail)}); };
    const std::string where = "node at depth " + std::to_string(depth) + " (lo=" + std::to_string(v.lo) + ")";
    if (v.leaf) {
        if (leaf_depth == std::numeric_limits<std::size_t>::max()) leaf_depth = depth;
        if (depth != leaf_depth) fail("shape", where + ": leaf depth differs");
        if (v.pts.size() > bld.k()) fail("shape", where + ": leaf overflow");
        if (!is_root && v.pts.size() < half_up(bld.k())) fail("shape", where + ": leaf underflow");
        for (std::size_t i = 1; i < v.pts.size(); ++i)
            if (!(v.pts[i - 1].x < v.pts[i].x)) fail("shape", where + ": leaf not sorted by x");
    } else {
        if (v.kids.size() > 2 * bld.a()) fail("shape", where + ": degree above 2a");
        if (is_root ? v.kids.size() < 2 : v.kids.size() < bld.a()) fail("shape", where + ": degree too small");
        if (v.rep.size() != v.kids.size()) fail("stale-rep", where + ": representative block size mismatch");
        for (std::size_t i = 0; i < v.kids.size(); ++i) {
            if (i < v.rep.size() && !same_handles(v.rep[i], critical_handles(v.kids[i]->queue)))
                fail("stale-rep", where + ": child " + std::to_string(i));
            if (i > 0 && !(v.kids[i - 1]->lo < v.kids[i]->lo)) fail("shape", where + ": children out of x order");
            check_rec(*v.kids[i], bld, false, depth + 1, leaf_depth, out, drain_limit, total);
        }
    }
    for (const auto& viol : validate(v.queue)) fail("queue", where + ": " + viol.invariant + " " + viol.detail);
    const long d = delta(v.queue);
    if (!v.queue.is_empty() && d < 2 && !(top_level_records(v.queue) == 1 && d >= 1))
        fail("state", where + ": state " + std::to_string(d));
    if (total <= drain_limit) {
        std::vector<Point> pts;
        collect_points(v, pts);
        if (quiet_drain(v.queue) != scan_maxima(pts)) fail("drain", where + ": drain differs from subtree maxima");
    }
}

void preorder(const Node& v, const std::function<void(const Node&)>& f) {
    f(v);
    for (const auto& c : v.kids) preorder(*c, f);
}

}  // namespace

Index::Index(IndexConfig cfg, std::shared_ptr<blockio::IoModel> io) : cfg_(cfg) {
    cfg_.check();
    blockio::IoConfig ic{cfg_.B, cfg_.M, cfg_.k()};
    if (!io) io = std::make_shared<blockio::IoModel>(ic);
    ctx_ = std::make_shared<const Context>(ic, std::move(io));
    root_ = make_leaf({});
    root_->queue = SkyQueue::empty(ctx_);
}

Index::~Index() = default;
Index::Index(Index&&) noexcept = default;
Index& Index::operator=(Index&&) noexcept = default;

Index Index::build(IndexConfig cfg, std::vector<Point> points, std::shared_ptr<blockio::IoModel> io) {
    Index idx(cfg, std::move(io));
    std::sort(points.begin(), points.end(), [](const Point& p, const Point& q) { return p.x < q.x; });
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i - 1].x == points[i].x) throw DuplicateX(points[i].x);
    if (points.empty()) return idx;
    Builder bld(idx.cfg_, idx.ctx_);
    const std::size_t k = bld.k();
    const std::size_t a = bld.a();

    // Leaves and internal nodes are packed to about 3/4 of capacity so that
    // single updates rarely restructure the tree.
    std::vector<std::unique_ptr<Node>> level;
    std::size_t pos = 0;
    for (std::size_t n : pack(points.size(), std::max<std::size_t>(1, (3 * k + 3) / 4), half_up(k), k)) {
        std::vector<Point> pts(points.begin() + static_cast<std::ptrdiff_t>(pos),
                               points.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        auto leaf = make_leaf(std::move(pts));
        bld.recompute(*leaf);
        level.push_back(std::move(leaf));
    }
    while (level.size() > 1) {
        std::vector<std::unique_ptr<Node>> up;
        std::size_t at = 0;
        for (std::size_t n : pack(level.size(), (3 * a + 1) / 2, a, 2 * a)) {
            std::vector<std::unique_ptr<Node>> kids;
            for (std::size_t t = 0; t < n; ++t) kids.push_back(std::move(level[at++]));
            auto node = make_internal(std::move(kids));
            bld.recompute(*node);
            up.push_back(std::move(node));
        }
        level = std::move(up);
    }
    idx.root_ = std::move(level.front());
    idx.size_ = points.size();
    return idx;
}

void Index::insert(const Point& p) {
    Builder bld(cfg_, ctx_);
    if (auto sib = insert_rec(bld, *root_, p)) {
        std::vector<std::unique_ptr<Node>> kids;
        kids.push_back(std::move(root_));
        kids.push_back(std::move(sib));
        root_ = make_internal(std::move(kids));
        bld.recompute(*root_);
    }
    ++size_;
}

void Index::remove(const Point& p) {
    Builder bld(cfg_, ctx_);
    remove_rec(bld, *root_, p);
    while (!root_->leaf && root_->kids.size() == 1) root_ = std::move(root_->kids.front());
    --size_;
}

std::vector<Point> Index::query3(const QueryRange3& r) const {
    if (size_ == 0 || r.x_lo > r.x_hi) return {};
    Builder bld(cfg_, ctx_);
    blockio::IoModel* io = ctx_->io();

    // Temporary structures live in memory only; one scope so every record is
    // read at most once per query.
    auto policy = blockio::PolicyGuard::current();
    policy.persist = false;
    policy.ends_resident = true;
    blockio::PolicyGuard guard(policy);
    blockio::OpScope scope(io);

    const Path pl = descend(root_.get(), r.x_lo);
    const Path pr = descend(root_.get(), r.x_hi);
    const std::size_t inner = pl.index.size();  // internal levels
    std::size_t s = 0;
    while (s < inner && pl.index[s] == pr.index[s]) ++s;
    for (std::size_t d = 0; d <= inner; ++d) {
        bld.load(*pl.nodes[d]);
        if (d > s) bld.load(*pr.nodes[d]);
    }

    auto in_range = [&](const Point& p) { return p.x >= r.x_lo && p.x <= r.x_hi && p.y >= r.y_lo; };
    const Node* left_leaf = pl.nodes.back();
    const Node* right_leaf = pr.nodes.back();
    if (s == inner) {
        std::vector<Point> pts;
        for (const auto& p : left_leaf->pts)
            if (in_range(p)) pts.push_back(p);
        return scan_maxima(pts);
    }

    // Subtrees strictly between the two paths, by increasing x.
    std::vector<SkyQueue> qs;
    blockio::PinGuard pins(io, {});
    auto take = [&](const Node* parent, std::size_t c) {
        qs.push_back(parent->kids[c]->queue);
        for (const auto& h : parent->rep[c]) pins.add(h);
    };
    for (std::size_t d = inner; d-- > s + 1;)
        for (std::size_t c = pl.index[d] + 1; c < pl.nodes[d]->kids.size(); ++c) take(pl.nodes[d], c);
    for (std::size_t c = pl.index[s] + 1; c < pr.index[s]; ++c) take(pl.nodes[s], c);
    for (std::size_t d = s + 1; d < inner; ++d)
        for (std::size_t c = 0; c < pr.index[d]; ++c) take(pr.nodes[d], c);

    // Right boundary leaf: its in-range maxima bound everything to the left.
    std::vector<Point> right_pts;
    for (const auto& p : right_leaf->pts)
        if (in_range(p)) right_pts.push_back(p);
    std::vector<Point> right = scan_maxima(right_pts);
    const bool have_right = !right.empty();
    const Coord right_top = have_right ? right.front().y : 0;

    std::vector<Point> mid;
    bool have_mid = false;
    Coord mid_top = 0;
    if (!qs.empty()) {
        SkyQueue t = concat_sequence(qs);
        if (!t.is_empty()) {
            have_mid = true;
            mid_top = find_min(t).y;
        }
        while (!t.is_empty()) {
            const SkylineKey& m = find_min(t);
            if (m.y < r.y_lo || (have_right && m.y < right_top)) break;
            mid.push_back(m.point());
            t = delete_min(t).second;
        }
    }

    // Left boundary leaf: a point survives if nothing to its right is higher.
    bool have_bound = have_right || have_mid;
    Coord bound = have_right ? right_top : mid_top;
    if (have_mid && have_right) bound = std::max(right_top, mid_top);
    std::vector<Point> left_pts;
    for (const auto& p : left_leaf->pts)
        if (in_range(p)) left_pts.push_back(p);
    std::vector<Point> left;
    for (const auto& p : scan_maxima(left_pts))
        if (!have_bound || p.y >= bound) left.push_back(p);

    std::vector<Point> out = std::move(left);
    out.insert(out.end(), mid.begin(), mid.end());
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

std::vector<Point> Index::report_all() const {
    if (size_ == 0) return {};
    auto policy = blockio::PolicyGuard::current();
    policy.persist = false;
    policy.ends_resident = true;
    blockio::PolicyGuard guard(policy);
    blockio::IoModel* io = ctx_->io();
    blockio::OpScope scope(io);
    Builder(cfg_, ctx_).load(*root_);
    blockio::PinGuard pins(io, critical_handles(root_->queue));
    return to_points(drain(root_->queue));
}

std::vector<SkylineViolation> Index::check(std::size_t drain_limit) const {
    std::vector<SkylineViolation> out;
    Builder bld(cfg_, ctx_);
    auto policy = blockio::PolicyGuard::current();
    policy.charge = false;
    blockio::PolicyGuard guard(policy);
    std::size_t leaf_depth = std::numeric_limits<std::size_t>::max();
    check_rec(*root_, bld, true, 0, leaf_depth, out, drain_limit, size_);
    if (root_->count != size_) out.push_back({"shape", "root count differs from index size"});
    return out;
}

std::size_t Index::height() const {
    std::size_t h = 0;
    for (const Node* v = root_.get(); !v->leaf; v = v->kids.front().get()) ++h;
    return h;
}

std::vector<const void*> Index::version_handles() const {
    std::vector<const void*> out;
    preorder(*root_, [&](const Node& v) { out.push_back(v.queue.identity()); });
    return out;
}

std::vector<std::vector<Point>> Index::node_drains() const {
    std::vector<std::vector<Point>> out;
    preorder(*root_, [&](const Node& v) { out.push_back(quiet_drain(v.queue)); });
    return out;
}

std::vector<std::size_t> Index::shape() const {
    std::vector<std::size_t> out;
    preorder(*root_, [&](const Node& v) { out.push_back(v.leaf ? v.pts.size() : v.kids.size()); });
    return out;
}

void Index::debug_corrupt_rep_block() {
    if (root_->leaf || root_->rep.empty()) return;
    auto& hs = root_->rep.front();
    if (hs.empty())
        hs.push_back({0, 0});
    else
        hs.front().id = 0;
}

std::vector<Point> parse_points(std::istream& in) {
    std::vector<Point> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        Point p;
        if (!(ls >> p.x)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError(no, "expected `x y`");
        }
        std::string rest;
        if (!(ls >> p.y) || (ls >> rest)) throw ParseError(no, "expected `x y`");
        out.push_back(p);
    }
    return out;
}

std::vector<ScriptCommand> parse_script(std::istream& in) {
    using K = ScriptCommand::Kind;
    std::vector<ScriptCommand> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op)) continue;
        ScriptCommand c{K::Check};
        std::size_t args = 0;
        if (op == "I") {
            c.kind = K::Insert;
            args = 2;
        } else if (op == "D") {
            c.kind = K::Delete;
            args = 2;
        } else if (op == "Q") {
            c.kind = K::Query;
            args = 3;
        } else if (op == "A") {
            c.kind = K::ReportAll;
        } else if (op == "C") {
            c.kind = K::Check;
        } else {
            throw ParseError(no, "unknown command `" + op + "`");
        }
        Coord* slots[] = {&c.a, &c.b, &c.c};
        for (std::size_t i = 0; i < args; ++i)
            if (!(ls >> *slots[i])) throw ParseError(no, "command `" + op + "` expects " + std::to_string(args) + " integers");
        std::string rest;
        if (ls >> rest) throw ParseError(no, "trailing input after `" + op + "`");
        if (c.kind == K::Query && c.a > c.b) throw ParseError(no, "query needs xlo <= xhi");
        out.push_back(c);
    }
    return out;
}

std::string format_points(const std::vector<Point>& pts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ' ';
        os << pts[i];
    }
    return os.str();
}

void run_script(Index& idx, const std::vector<ScriptCommand>& cmds, std::ostream& out) {
    using K = ScriptCommand::Kind;
    for (const auto& c : cmds) {
        switch (c.kind) {
            case K::Insert:
                idx.insert({c.a, c.b});
                break;
            case K::Delete:
                idx.remove({c.a, c.b});
                break;
            case K::Query:
                out << format_points(idx.query3({c.a, c.b, c.c})) << '\n';
                break;
            case K::ReportAll:
                out << format_points(idx.report_all()) << '\n';
                break;
            case K::Check:
                if (auto v = idx.check(); !v.empty()) throw CheckFailed(v.front());
                break;
        }
    }
}

}  // namespace iocpqa::skyline
