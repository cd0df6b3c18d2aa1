#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace iocpqa::tools {

enum ExitCode : int { kOk = 0, kViolations = 1, kParseError = 2, kSemanticError = 3 };

/// Counters of one run or one bench row.
struct RunReport {
    std::size_t n = 0;
    std::size_t b = 0;
    std::size_t B = 0;
    double epsilon = 0.0;
    std::size_t ops = 0;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    double mean_query_blocks = 0.0;
    double mean_update_blocks = 0.0;
    double slope = 0.0;       // fitted blocks per queue operation (bench)
    std::uint64_t max_op = 0; // most blocks charged by one queue operation (bench)
    std::map<std::string, std::size_t> counts;
    double wall_ms = -1.0;    // omitted when negative

    std::string to_json() const;
    /// `key=value` pairs in a fixed order.
    std::string to_text() const;
};

/// Entry point shared by the binary and the tests.
int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iocpqa::tools
