#include "iocpqa/blockio.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace iocpqa::blockio {

void IoConfig::check() const {
    if (buffer_b < 1) throw InvalidConfig("IoConfig: b must be >= 1");
    if (buffer_b > block_words) throw InvalidConfig("IoConfig: b must be <= B");
    if (block_words > memory_words) throw InvalidConfig("IoConfig: B must be <= M");
}

std::uint64_t blocks_for(std::size_t words, std::size_t block_words) noexcept {
    if (words == 0 || block_words == 0) return 0;
    return (words + block_words - 1) / block_words;
}

std::string IoCounters::to_text() const {
    std::ostringstream os;
    os << "reads=" << reads << " writes=" << writes << " peak_pinned=" << peak_pinned_words;
    return os.str();
}

std::string IoCounters::to_json() const {
    nlohmann::ordered_json j;
    j["reads"] = reads;
    j["writes"] = writes;
    j["peak_pinned"] = peak_pinned_words;
    return j.dump();
}

IoCounters IoCounters::parse_text(const std::string& text) {
    IoCounters c;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("IoCounters: bad token " + tok);
        auto key = tok.substr(0, eq);
        auto val = std::stoull(tok.substr(eq + 1));
        if (key == "reads") {
            c.reads = val;
        } else if (key == "writes") {
            c.writes = val;
        } else if (key == "peak_pinned") {
            c.peak_pinned_words = val;
        } else {
            throw std::invalid_argument("IoCounters: unknown key " + key);
        }
    }
    return c;
}

RecordId next_record_id() noexcept {
    static std::atomic<RecordId> next{1};
    return next.fetch_add(1, std::memory_order_relaxed);
}

IoModel::IoModel(IoConfig cfg) : cfg_(cfg) { cfg_.check(); }

void IoModel::charge_record_load(std::size_t words) noexcept {
    reads_.fetch_add(blocks_for(words, cfg_.block_words), std::memory_order_relaxed);
}

void IoModel::charge_record_store(std::size_t words) noexcept {
    writes_.fetch_add(blocks_for(words, cfg_.block_words), std::memory_order_relaxed);
}

std::uint64_t IoModel::charge_record_load(RecordId id, std::size_t words) {
    if (is_pinned(id)) return 0;
    auto n = blocks_for(words, cfg_.block_words);
    reads_.fetch_add(n, std::memory_order_relaxed);
    return n;
}

std::uint64_t IoModel::charge_record_store(RecordId id, std::size_t words) {
    if (is_pinned(id)) return 0;
    auto n = blocks_for(words, cfg_.block_words);
    writes_.fetch_add(n, std::memory_order_relaxed);
    return n;
}

void IoModel::pin(RecordHandle h) {
    if (h.id == 0) throw UnknownHandle("IoModel::pin: invalid record handle");
    std::lock_guard lock(pin_mu_);
    auto& e = pinned_[h.id];
    if (e.count++ == 0) {
        e.words = h.words;
        pinned_words_ += h.words;
        peak_pinned_words_ = std::max(peak_pinned_words_, pinned_words_);
        if (pinned_words_ > cfg_.memory_words) violation_.store(true, std::memory_order_relaxed);
    }
}

void IoModel::unpin(RecordId id) {
    std::lock_guard lock(pin_mu_);
    auto it = pinned_.find(id);
    if (it == pinned_.end()) throw UnknownHandle("IoModel::unpin: record is not pinned");
    if (--it->second.count == 0) {
        pinned_words_ -= it->second.words;
        pinned_.erase(it);
    }
}

bool IoModel::is_pinned(RecordId id) const {
    std::lock_guard lock(pin_mu_);
    return pinned_.count(id) != 0;
}

std::uint64_t IoModel::pinned_words() const {
    std::lock_guard lock(pin_mu_);
    return pinned_words_;
}

IoCounters IoModel::snapshot() const {
    IoCounters c;
    c.reads = reads_.load(std::memory_order_relaxed);
    c.writes = writes_.load(std::memory_order_relaxed);
    c.violation = violation_.load(std::memory_order_relaxed);
    std::lock_guard lock(pin_mu_);
    c.peak_pinned_words = peak_pinned_words_;
    return c;
}

void IoModel::reset() {
    reads_.store(0);
    writes_.store(0);
    violation_.store(false);
    std::lock_guard lock(pin_mu_);
    peak_pinned_words_ = pinned_words_;
}

PinGuard::PinGuard(IoModel* model, std::vector<RecordHandle> handles) : model_(model) {
    for (const auto& h : handles) add(h);
}

PinGuard::PinGuard(PinGuard&& other) noexcept
    : model_(other.model_), ids_(std::move(other.ids_)) {
    other.model_ = nullptr;
    other.ids_.clear();
}

PinGuard& PinGuard::operator=(PinGuard&& other) noexcept {
    if (this != &other) {
        release();
        model_ = other.model_;
        ids_ = std::move(other.ids_);
        other.model_ = nullptr;
        other.ids_.clear();
    }
    return *this;
}

PinGuard::~PinGuard() { release(); }

void PinGuard::add(RecordHandle h) {
    if (!model_) return;
    model_->pin(h);
    ids_.push_back(h.id);
}

void PinGuard::release() noexcept {
    if (!model_) return;
    for (auto id : ids_) {
        try {
            model_->unpin(id);
        } catch (...) {
        }
    }
    ids_.clear();
}

namespace {
thread_local ChargePolicy t_policy{};
thread_local OpScope* t_scope = nullptr;
}  // namespace

PolicyGuard::PolicyGuard(ChargePolicy p) : saved_(t_policy) { t_policy = p; }
PolicyGuard::~PolicyGuard() { t_policy = saved_; }
ChargePolicy PolicyGuard::current() noexcept { return t_policy; }

OpScope::OpScope(IoModel* model) : model_(t_policy.charge ? model : nullptr), policy_(t_policy) {
    if (t_scope && t_scope->model_ == model_) outer_ = t_scope;
    if (!outer_) {
        outer_saved_ = t_scope;
        t_scope = this;
    }
}

OpScope::~OpScope() {
    if (!outer_) t_scope = outer_saved_;
}

OpScope* OpScope::current() noexcept { return t_scope; }

OpScope* OpScope::root() noexcept {
    OpScope* s = this;
    while (s->outer_) s = s->outer_;
    return s;
}

void OpScope::note_input_end(const std::shared_ptr<const BlockMeta>& b) {
    if (!model_ || !b) return;
    OpScope* r = root();
    if (!r->policy_.ends_resident) return;
    if (r->in_memory_.insert(b->id).second) r->input_ends_.push_back(b);
}

void OpScope::touch(const std::shared_ptr<const BlockMeta>& b) {
    if (!model_ || !b) return;
    OpScope* r = root();
    if (!r->in_memory_.insert(b->id).second) return;
    r->reads_ += model_->charge_record_load(b->id, b->words);
}

void OpScope::created(const std::shared_ptr<const BlockMeta>& b) {
    if (!model_ || !b) return;
    OpScope* r = root();
    r->in_memory_.insert(b->id);
    r->created_.push_back(b);
}

void OpScope::superseded(RecordId id) {
    if (!model_) return;
    root()->superseded_.insert(id);
}

void OpScope::finish(std::span<const RecordId> result_ends) {
    if (!model_ || outer_ || finished_) return;
    finished_ = true;
    if (!policy_.persist) return;
    std::unordered_set<RecordId> ends(result_ends.begin(), result_ends.end());
    auto flush = [&](const std::weak_ptr<const BlockMeta>& w) {
        auto b = w.lock();
        if (!b || b->on_disk.load(std::memory_order_relaxed)) return;
        if (ends.count(b->id) || superseded_.count(b->id)) return;
        writes_ += model_->charge_record_store(b->id, b->words);
        b->on_disk.store(true, std::memory_order_relaxed);
    };
    for (const auto& w : created_) flush(w);
    for (const auto& w : input_ends_) flush(w);
}

}  // namespace iocpqa::blockio
