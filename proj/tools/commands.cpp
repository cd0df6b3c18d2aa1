#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iocpqa/cpqa.hpp"
#include "iocpqa/oracle.hpp"
#include "iocpqa/skyline.hpp"
#include "workloads.hpp"

namespace iocpqa::tools {

namespace {

using skyline::Index;
using skyline::IndexConfig;
using skyline::Point;

struct Common {
    std::size_t B = 64;
    double epsilon = 0.3333;
    std::size_t b = 0;  // 0: derived leaf parameter
    std::uint64_t seed = 42;
    bool json = false;
};

IndexConfig index_config(const Common& c) {
    IndexConfig cfg;
    cfg.B = c.B;
    cfg.M = std::max<std::size_t>(c.B, std::size_t{1} << 24);
    cfg.epsilon = c.epsilon;
    cfg.leaf = c.b;
    return cfg;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Point> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw skyline::ParseError(0, "cannot open " + path);
    return skyline::parse_points(in);
}

int cmd_run(const Common& c, const std::string& points_path, const std::string& script_path,
            const std::string& report_path, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Point> pts;
    std::vector<skyline::ScriptCommand> cmds;
    try {
        pts = read_points(points_path);
        std::ifstream in(script_path);
        if (!in) throw skyline::ParseError(0, "cannot open " + script_path);
        cmds = skyline::parse_script(in);
    } catch (const skyline::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    }

    const IndexConfig cfg = index_config(c);
    RunReport rep;
    rep.n = pts.size();
    rep.b = cfg.k();
    rep.B = cfg.B;
    rep.epsilon = cfg.epsilon;
    rep.ops = cmds.size();
    int code = kOk;
    try {
        auto idx = Index::build(cfg, pts);
        auto* io = idx.io();
        const auto base = io->snapshot();
        double qblocks = 0, ublocks = 0;
        std::size_t nq = 0, nu = 0;
        for (const auto& cmd : cmds) {
            using K = skyline::ScriptCommand::Kind;
            const auto before = io->snapshot().total();
            skyline::run_script(idx, {cmd}, out);
            const double spent = static_cast<double>(io->snapshot().total() - before);
            switch (cmd.kind) {
                case K::Insert: ++rep.counts["insert"]; ublocks += spent; ++nu; break;
                case K::Delete: ++rep.counts["delete"]; ublocks += spent; ++nu; break;
                case K::Query: ++rep.counts["query"]; qblocks += spent; ++nq; break;
                case K::ReportAll: ++rep.counts["report_all"]; qblocks += spent; ++nq; break;
                case K::Check: ++rep.counts["check"]; break;
            }
        }
        const auto end = io->snapshot();
        rep.reads = end.reads - base.reads;
        rep.writes = end.writes - base.writes;
        if (nq) rep.mean_query_blocks = qblocks / static_cast<double>(nq);
        if (nu) rep.mean_update_blocks = ublocks / static_cast<double>(nu);
    } catch (const skyline::DuplicateX& e) {
        err << "error: " << e.what() << '\n';
        code = kSemanticError;
    } catch (const skyline::NotFound& e) {
        err << "error: " << e.what() << '\n';
        code = kSemanticError;
    } catch (const skyline::CheckFailed& e) {
        err << "error: " << e.what() << '\n';
        code = kSemanticError;
    } catch (const blockio::InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    if (code != kOk) return code;
    rep.wall_ms = elapsed_ms(t0);
    const std::string text = c.json ? rep.to_json() : rep.to_text();
    if (report_path.empty()) {
        err << text << '\n';
    } else {
        std::ofstream f(report_path);
        f << text << '\n';
    }
    return kOk;
}

int cmd_bench(const Common& c, const std::vector<std::size_t>& ns, const std::vector<std::size_t>& bs,
              std::size_t queries, std::size_t updates, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t b : bs)
        if (b < 1 || b > c.B) {
            err << "error: every b must lie in [1, B]\n";
            return kParseError;
        }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t n : ns) {
        for (std::size_t b : bs) {
            const auto am = amortized_workload(n, b, c.B, c.seed);
            Common sc = c;
            sc.b = b;
            const auto sk = skyline_workload(n, index_config(sc), c.seed, queries, updates);
            RunReport rep;
            rep.n = n;
            rep.b = b;
            rep.B = c.B;
            rep.epsilon = c.epsilon;
            rep.ops = am.ops;
            rep.reads = am.reads;
            rep.writes = am.writes;
            rep.slope = am.slope;
            rep.max_op = am.max_op;
            rep.mean_query_blocks = sk.mean_query_blocks;
            rep.mean_update_blocks = sk.mean_update_blocks;
            if (c.json)
                rows.push_back(nlohmann::ordered_json::parse(rep.to_json()));
            else
                out << rep.to_text() << '\n';
        }
    }
    if (c.json) out << rows.dump(2) << '\n';
    err << "wall_ms=" << std::fixed << std::setprecision(1) << elapsed_ms(t0) << '\n';
    return kOk;
}

/// Queue fuzz against the list oracle; returns the first mismatch or "".
std::string fuzz_queues(std::size_t ops, std::uint64_t seed) {
    using Q = Queue<std::int64_t>;
    constexpr std::size_t kPool = 16;
    auto ctx = Context::make({64, std::size_t{1} << 20, 4});
    std::vector<Q> qs(kPool, Q::empty(ctx));
    std::vector<std::vector<std::int64_t>> ref(kPool);
    std::size_t step = 0;
    for (const auto& op : oracle::gen_ops(seed, ops, kPool)) {
        ++step;
        const std::string at = "cpqa step " + std::to_string(step) + ": ";
        switch (op.kind) {
            case oracle::OpKind::Insert:
                qs[op.a] = insert_and_attrite(qs[op.a], op.key);
                ref[op.a] = oracle::naive_catenate_and_attrite(ref[op.a], {op.key});
                break;
            case oracle::OpKind::Catenate:
                qs[op.a] = catenate_and_attrite(qs[op.a], qs[op.c]);
                ref[op.a] = oracle::naive_catenate_and_attrite(ref[op.a], ref[op.c]);
                break;
            case oracle::OpKind::DeleteMin:
                if (ref[op.a].empty()) continue;
                {
                    auto [e, q] = delete_min(qs[op.a]);
                    if (e != ref[op.a].front()) return at + "delete_min differs from oracle";
                    qs[op.a] = q;
                    ref[op.a].erase(ref[op.a].begin());
                }
                break;
            case oracle::OpKind::FindMin:
                if (!ref[op.a].empty() && find_min(qs[op.a]) != ref[op.a].front()) return at + "find_min differs from oracle";
                continue;
            case oracle::OpKind::Drain:
                if (drain(qs[op.a]) != ref[op.a]) return at + "drain differs from oracle";
                continue;
        }
        if (auto v = validate(qs[op.a]); !v.empty()) return at + v.front().invariant + " " + v.front().detail;
    }
    return "";
}

int cmd_validate(const Common& c, const std::string& points_path, std::size_t ops, bool inject_fault,
                 std::ostream& out, std::ostream& err) {
    std::vector<Point> pts;
    try {
        pts = read_points(points_path);
    } catch (const skyline::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    }
    auto to_oracle = [](const std::vector<Point>& v) {
        std::vector<oracle::Pt> o;
        for (const auto& p : v) o.push_back({p.x, p.y});
        return o;
    };
    auto fail = [&](const std::string& what) {
        err << "violation: " << what << '\n';
        return kViolations;
    };
    try {
        auto idx = Index::build(index_config(c), pts);
        if (inject_fault) idx.debug_corrupt_rep_block();
        std::mt19937_64 rng(c.seed);
        std::unordered_set<std::int64_t> xs;
        std::int64_t lo = 0, hi = 1;
        for (const auto& p : pts) {
            xs.insert(p.x);
            lo = std::min({lo, p.x, p.y});
            hi = std::max({hi, p.x, p.y});
        }
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        auto coord = [&] { return lo + static_cast<std::int64_t>(rng() % span); };
        auto run_check = [&]() -> std::string {
            auto v = idx.check();
            return v.empty() ? "" : v.front().kind + ": " + v.front().detail;
        };
        if (auto v = run_check(); !v.empty()) return fail(v);
        for (std::size_t i = 1; i <= ops; ++i) {
            const auto roll = rng() % 3;
            if (roll == 0) {
                std::int64_t x = coord();
                if (xs.insert(x).second) {
                    const Point p{x, coord()};
                    idx.insert(p);
                    pts.push_back(p);
                }
            } else if (roll == 1 && !pts.empty()) {
                const std::size_t j = rng() % pts.size();
                idx.remove(pts[j]);
                xs.erase(pts[j].x);
                pts[j] = pts.back();
                pts.pop_back();
            } else {
                std::int64_t a = coord(), b = coord();
                if (a > b) std::swap(a, b);
                const std::int64_t y = coord();
                if (!(to_oracle(idx.query3({a, b, y})) == oracle::naive_query3(to_oracle(pts), a, b, y)))
                    return fail("query3 differs from oracle at step " + std::to_string(i));
            }
            if (i % 64 == 0)
                if (auto v = run_check(); !v.empty()) return fail(v);
        }
        if (auto v = run_check(); !v.empty()) return fail(v);
        if (!(to_oracle(idx.report_all()) == oracle::naive_maxima(to_oracle(pts)))) return fail("report_all differs from oracle");
    } catch (const skyline::DuplicateX& e) {
        err << "error: " << e.what() << '\n';
        return kSemanticError;
    } catch (const blockio::InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    if (auto v = fuzz_queues(ops, c.seed); !v.empty()) return fail(v);
    out << "ok: " << ops << " operations, no violations\n";
    return kOk;
}

void add_common(CLI::App* app, Common& c, bool with_b) {
    app->add_option("--B", c.B, "Block size in words")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--epsilon", c.epsilon, "Index parameter epsilon")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    if (with_b) app->add_option("--b", c.b, "Leaf and buffer parameter (default derived from B and epsilon)")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    app->add_flag("--json", c.json, "Emit JSON");
}

}  // namespace

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["b"] = b;
    j["B"] = B;
    j["epsilon"] = epsilon;
    j["ops"] = ops;
    j["reads"] = reads;
    j["writes"] = writes;
    j["mean_query_blocks"] = mean_query_blocks;
    j["mean_update_blocks"] = mean_update_blocks;
    j["slope"] = slope;
    j["max_op"] = max_op;
    if (!counts.empty()) j["counts"] = counts;
    if (wall_ms >= 0) j["wall_ms"] = wall_ms;
    return j.dump();
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << std::setprecision(6) << "n=" << n << " b=" << b << " B=" << B << " epsilon=" << epsilon << " ops=" << ops
       << " reads=" << reads << " writes=" << writes << " mean_query_blocks=" << mean_query_blocks
       << " mean_update_blocks=" << mean_update_blocks << " slope=" << slope << " max_op=" << max_op;
    for (const auto& [k, v] : counts) os << ' ' << k << '=' << v;
    if (wall_ms >= 0) os << " wall_ms=" << std::fixed << std::setprecision(1) << wall_ms;
    return os.str();
}

int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"External-memory catenable priority queues and 3-sided skyline index"};
    app.require_subcommand(1);

    Common run_c, bench_c, val_c;
    std::string points, script, report;
    auto* run = app.add_subcommand("run", "Build an index from a point file and replay a query script");
    run->add_option("points", points, "Point file")->required();
    run->add_option("script", script, "Query script")->required();
    run->add_option("--report", report, "Write the report here instead of standard error");
    add_common(run, run_c, true);

    std::vector<std::size_t> ns{100000}, bs{4, 16, 64};
    std::size_t queries = 200, updates = 200;
    auto* bench = app.add_subcommand("bench", "Sweep n and b and print one report row each");
    bench->add_option("--n", ns, "Operation counts")->delimiter(',')->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--b-list", bs, "Buffer parameters")->delimiter(',')->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--queries", queries, "Skyline queries per row")->capture_default_str();
    bench->add_option("--updates", updates, "Skyline updates per row")->capture_default_str();
    add_common(bench, bench_c, false);

    std::string vpoints;
    std::size_t vops = 1000;
    bool inject = false;
    auto* val = app.add_subcommand("validate", "Fuzz against the oracles and run the consistency checks");
    val->add_option("points", vpoints, "Point file")->required();
    val->add_option("--ops", vops, "Fuzzed operations")->capture_default_str();
    val->add_flag("--inject-fault", inject)->group("");
    add_common(val, val_c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kParseError;
    }
    if (*run) return cmd_run(run_c, points, script, report, out, err);
    if (*bench) return cmd_bench(bench_c, ns, bs, queries, updates, out, err);
    return cmd_validate(val_c, vpoints, vops, inject, out, err);
}

}  // namespace iocpqa::tools
