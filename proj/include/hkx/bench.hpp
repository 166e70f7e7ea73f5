#pragma once

#include <string>
#include <vector>

#include "hkx/suites.hpp"

namespace hkx::bench {

struct TimingStats {
    double average_ns = 0.0;
    double std_dev_ns = 0.0;  // sample standard deviation, n-1 divisor
    uint64_t max_ns = 0;
    uint64_t min_ns = 0;
    size_t iterations = 0;
};

// One evaluation-table row.
struct BenchRow {
    std::string label;
    TimingStats timing;
    size_t bytes_transfer = 0;
    unsigned packets = 0;
    unsigned strength_pqc = 0;
    unsigned strength_classical = 0;
    bool verified_accounting = true;
};

struct BenchConfig {
    size_t iterations = 100;
    size_t warmup = 10;
    size_t mtu = 1500;
    std::vector<std::string> suites;  // label filter; empty = all
    std::string format = "table";     // table | csv | json
};

struct ByteAccounting {
    size_t flight1_bytes = 0;
    size_t flight2_bytes = 0;
    size_t total = 0;
    bool verified = true;  // false when the total is a recorded override
};

// Requires at least two samples (sample std dev needs n-1 >= 1).
TimingStats compute_stats(const std::vector<uint64_t>& samples_ns);

// flight1 = classical_pk + pq_pk + extra_flight1; flight2 = classical_pk +
// pq_ct. An accounting override replaces the total and clears `verified`.
ByteAccounting account_bytes(const HybridSuite& suite);

// Per-flight ceiling at the payload MTU.
unsigned account_packets(const std::vector<size_t>& flight_bytes, size_t mtu);

// Packets for a suite row: per-flight ceiling, or the recorded override.
unsigned suite_packets(const HybridSuite& suite, size_t mtu);

// Times the local key-exchange sequence (keygen, encapsulate, decapsulate,
// session-key derivation; no QKD, no network) per suite and fills every
// table column. Warmup iterations are excluded from the statistics.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

// Accounting-only rows (timing left zeroed); used by check mode and the
// suites export.
std::vector<BenchRow> accounting_rows(const BenchConfig& cfg);

// "table", "csv" (fixed header: function,avg_ns,std_ns,max_ns,min_ns,bytes,
// packets,pqc_bits,classical_bits,verified) or "json".
std::string render_report(const std::vector<BenchRow>& rows, const std::string& format);

std::vector<BenchRow> parse_report_json(const std::string& text);

// Expected byte/packet/strength columns recorded from the evaluation table.
struct TableExpectation {
    std::string_view label;
    size_t bytes;
    unsigned packets;
    unsigned strength_pqc;
    unsigned strength_classical;
    bool accounting_verifiable;  // false for the McEliece row
};

const std::vector<TableExpectation>& table_expectations();

struct CheckResult {
    bool ok = true;
    std::vector<std::string> lines;  // one human-readable line per suite
};

// Compares computed accounting against the recorded table values for the
// selected suites (all when the filter is empty).
CheckResult check_accounting(const std::vector<std::string>& suite_filter, size_t mtu = 1500);

}  // namespace hkx::bench
