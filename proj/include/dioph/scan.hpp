#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dioph/count.hpp"

namespace dioph {

struct PrimePower {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
};

// All odd prime powers q in [q_min, q_max], ascending.
std::vector<PrimePower> enumerate_odd_prime_powers(std::uint32_t q_min,
                                                   std::uint32_t q_max);

// One (q, m, r, variant) measurement. The rationals are exact "num/den"
// strings; the norm fields are derived reals.
struct ScanRow {
    std::uint32_t q = 0, p = 0, k = 0, m = 0;
    Fe r = 0;
    std::string variant;
    std::string algo;
    std::uint64_t count = 0;
    std::string main_term;
    std::string residual;
    double residual_norm_1 = 0.0;
    double residual_norm_half = 0.0;
    std::int64_t millis = 0;
};

ScanRow row_from_report(const CountReport& rep);

enum class RMode { all, one_per_square_class, fixed };

struct ScanOptions {
    std::uint32_t m = 4;
    std::uint32_t q_min = 3;
    std::uint32_t q_max = 27;
    RMode r_mode = RMode::one_per_square_class;
    Fe fixed_r = 1;
    EntriesDomain entries_domain = EntriesDomain::nonzero;
    SquareRule square_rule = SquareRule::qr_only;
    Multiplicity multiplicity = Multiplicity::ordered_with_repeats;
    unsigned threads = 1;
    std::uint64_t per_row_budget = 1000000000ull;  // skip rows beyond this
    bool record_timings = false;  // keep CSV byte-identical across runs by default
};

struct ScanResult {
    std::vector<ScanRow> rows;                        // ordered by (q, r)
    std::vector<std::pair<std::uint32_t, Fe>> skipped;  // rows over budget
};

// One count_dfs row per (q, r). one_per_square_class emits exactly two rows
// per q (r = 1 and the smallest non-square), justified by N_r = N_{r s^2}.
ScanResult scan_residuals(const ScanOptions& opt);

struct ResidualSummary {
    double max_norm_1 = 0.0;
    double max_norm_half = 0.0;
    double envelope_slope = 0.0;
    bool slope_defined = false;
    std::uint32_t bins_used = 0;
    std::uint32_t zero_bins = 0;  // bins excluded for an all-zero residual
};

// Envelope slope: |residual| maxima over bins of `bin_size` consecutive
// prime powers, least-squares fit of log max against log q.
ResidualSummary residual_summary(const std::vector<ScanRow>& rows,
                                 std::uint32_t bin_size = 4);

struct SmallestQResult {
    std::uint32_t m = 0;
    std::uint32_t q0 = 0;  // 0 when not found within range
    bool found = false;
    // (q, witness r with N_r = 0) for each odd prime power below q0.
    std::vector<std::pair<std::uint32_t, Fe>> failures;
};

// Smallest odd prime power q <= q_max with N_r(m,q) > 0 for all r != 0,
// checked on one representative per square class.
SmallestQResult search_smallest_q(std::uint32_t m, std::uint32_t q_max,
                                  unsigned threads = 1);

// CSV header: q,p,k,m,r,variant,algo,count,main_term,residual,
// residual_norm_1,residual_norm_half,millis
void write_rows_csv(const std::vector<ScanRow>& rows, std::ostream& out);
void write_rows_json(const std::vector<ScanRow>& rows, std::ostream& out);
std::vector<ScanRow> read_rows_csv(std::istream& in);
std::vector<ScanRow> read_rows_json(std::istream& in);

}  // namespace dioph
