#include "dioph/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dioph/field.hpp"

namespace dioph {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (v > limit / base) return limit + 1;
        v *= base;
    }
    return v;
}

}  // namespace

std::vector<PrimePower> enumerate_odd_prime_powers(std::uint32_t q_min,
                                                   std::uint32_t q_max) {
    if (q_min < 3 || q_min > q_max || q_max > Field::kDefaultTableCap)
        throw RangeError("enumerate_odd_prime_powers: need 3 <= q_min <= q_max <= cap");
    std::vector<PrimePower> out;
    for (std::uint32_t p = 3; p <= q_max; p += 2) {
        if (!is_prime_u32(p)) continue;
        std::uint64_t q = p;
        for (std::uint32_t k = 1; q <= q_max; ++k, q *= p)
            if (q >= q_min)
                out.push_back({p, k, static_cast<std::uint32_t>(q)});
    }
    std::sort(out.begin(), out.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.q < b.q; });
    return out;
}

ScanRow row_from_report(const CountReport& rep) {
    ScanRow row;
    row.q = rep.q;
    row.p = rep.p;
    row.k = rep.k;
    row.m = rep.spec.m;
    row.r = rep.spec.r;
    row.variant = rep.spec.variant_token();
    row.algo = rep.algo;
    row.count = rep.count;
    row.main_term = rat_to_string(rep.main_term);
    row.residual = rat_to_string(rep.residual);
    row.residual_norm_1 = rep.residual_norm_1;
    row.residual_norm_half = rep.residual_norm_half;
    row.millis = rep.millis;
    return row;
}

ScanResult scan_residuals(const ScanOptions& opt) {
    auto pps = enumerate_odd_prime_powers(opt.q_min, opt.q_max);

    struct Job {
        PrimePower pp;
        Fe r;
    };
    std::vector<Job> jobs;
    for (const auto& pp : pps) {
        if (opt.r_mode == RMode::fixed) {
            if (opt.fixed_r != 0 && opt.fixed_r < pp.q)
                jobs.push_back({pp, opt.fixed_r});
        } else if (opt.r_mode == RMode::all) {
            for (Fe r = 1; r < pp.q; ++r) jobs.push_back({pp, r});
        } else {
            jobs.push_back({pp, 0});  // placeholder, resolved per field below
        }
    }

    ScanResult result;
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            Field f = Field::make(job.pp.p, job.pp.k);
            std::vector<Fe> rs;
            if (opt.r_mode == RMode::one_per_square_class)
                rs = {1, f.smallest_nonsquare()};
            else
                rs = {job.r};
            for (Fe r : rs) {
                CountSpec spec;
                spec.m = opt.m;
                spec.r = r;
                spec.entries_domain = opt.entries_domain;
                spec.square_rule = opt.square_rule;
                spec.multiplicity = opt.multiplicity;
                const std::uint64_t domain =
                    f.q() - (spec.entries_domain == EntriesDomain::nonzero ? 1 : 0);
                if (checked_pow(domain, opt.m, opt.per_row_budget) >
                    opt.per_row_budget) {
                    std::lock_guard<std::mutex> lk(mu);
                    result.skipped.emplace_back(f.q(), r);
                    continue;
                }
                CountReport rep = count_dfs(f, spec, 1);
                if (!opt.record_timings) rep.millis = 0;
                ScanRow row = row_from_report(rep);
                std::lock_guard<std::mutex> lk(mu);
                result.rows.push_back(std::move(row));
            }
        }
    };

    unsigned threads = std::max(1u, opt.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    auto key = [](const ScanRow& r) { return std::pair(r.q, r.r); };
    std::sort(result.rows.begin(), result.rows.end(),
              [&](const ScanRow& a, const ScanRow& b) { return key(a) < key(b); });
    std::sort(result.skipped.begin(), result.skipped.end());
    return result;
}

ResidualSummary residual_summary(const std::vector<ScanRow>& rows,
                                 std::uint32_t bin_size) {
    if (rows.empty()) throw EmptyInputError("residual_summary: no rows");
    for (const auto& r : rows)
        if (r.m != rows.front().m)
            throw UsageError("residual_summary: rows mix different m");

    ResidualSummary s;
    // Max |residual| per q, from the exact rational strings.
    std::vector<std::pair<std::uint32_t, double>> per_q;  // sorted by q
    for (const auto& row : rows) {
        s.max_norm_1 = std::max(s.max_norm_1, row.residual_norm_1);
        s.max_norm_half = std::max(s.max_norm_half, row.residual_norm_half);
        BigRat res = rat_from_string(row.residual);
        double ar = std::abs(res.convert_to<double>());
        if (!per_q.empty() && per_q.back().first == row.q)
            per_q.back().second = std::max(per_q.back().second, ar);
        else if (std::any_of(per_q.begin(), per_q.end(),
                             [&](const auto& e) { return e.first == row.q; })) {
            for (auto& e : per_q)
                if (e.first == row.q) e.second = std::max(e.second, ar);
        } else {
            per_q.emplace_back(row.q, ar);
        }
    }
    std::sort(per_q.begin(), per_q.end());

    // Bin maxima over groups of consecutive prime powers. Each bin is
    // plotted at the q attaining its max so a pure power law fits exactly.
    std::vector<std::pair<double, double>> pts;  // (log q, log max residual)
    for (std::size_t i = 0; i < per_q.size(); i += bin_size) {
        double maxres = 0;
        std::uint32_t arg_q = per_q[i].first;
        std::size_t n = std::min<std::size_t>(bin_size, per_q.size() - i);
        for (std::size_t j = 0; j < n; ++j) {
            if (per_q[i + j].second > maxres) {
                maxres = per_q[i + j].second;
                arg_q = per_q[i + j].first;
            }
        }
        if (maxres == 0) {
            ++s.zero_bins;
            continue;
        }
        pts.emplace_back(std::log(static_cast<double>(arg_q)), std::log(maxres));
    }
    s.bins_used = static_cast<std::uint32_t>(pts.size());
    if (pts.size() < 2) {
        s.slope_defined = false;
        return s;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double denom = n * sxx - sx * sx;
    if (denom == 0) {
        s.slope_defined = false;
        return s;
    }
    s.envelope_slope = (n * sxy - sx * sy) / denom;
    s.slope_defined = true;
    return s;
}

SmallestQResult search_smallest_q(std::uint32_t m, std::uint32_t q_max,
                                  unsigned threads) {
    SmallestQResult result;
    result.m = m;
    for (const auto& pp : enumerate_odd_prime_powers(3, q_max)) {
        Field f = Field::make(pp.p, pp.k);
        Fe witness = 0;
        for (Fe r : {Fe(1), f.smallest_nonsquare()}) {
            CountSpec spec;
            spec.m = m;
            spec.r = r;
            CountReport rep = count_dfs(f, spec, threads);
            if (rep.count == 0) {
                witness = r;
                break;
            }
        }
        if (witness == 0) {  // both square classes positive
            result.q0 = pp.q;
            result.found = true;
            return result;
        }
        result.failures.emplace_back(pp.q, witness);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Persistence

static const char* kCsvHeader =
    "q,p,k,m,r,variant,algo,count,main_term,residual,residual_norm_1,"
    "residual_norm_half,millis";

void write_rows_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.q << ',' << r.p << ',' << r.k << ',' << r.m << ',' << r.r << ','
            << r.variant << ',' << r.algo << ',' << r.count << ',' << r.main_term
            << ',' << r.residual << ',' << fmt_double(r.residual_norm_1) << ','
            << fmt_double(r.residual_norm_half) << ',' << r.millis << '\n';
    }
}

std::vector<ScanRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw UsageError("bad CSV header");
    std::vector<ScanRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        // main_term and residual each contain no comma (num/den form)
        if (cells.size() != 13) throw UsageError("bad CSV row: " + line);
        ScanRow r;
        r.q = std::stoul(cells[0]);
        r.p = std::stoul(cells[1]);
        r.k = std::stoul(cells[2]);
        r.m = std::stoul(cells[3]);
        r.r = std::stoul(cells[4]);
        r.variant = cells[5];
        r.algo = cells[6];
        r.count = std::stoull(cells[7]);
        r.main_term = cells[8];
        r.residual = cells[9];
        r.residual_norm_1 = std::stod(cells[10]);
        r.residual_norm_half = std::stod(cells[11]);
        r.millis = std::stoll(cells[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_rows_json(const std::vector<ScanRow>& rows, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"q", r.q},
                       {"p", r.p},
                       {"k", r.k},
                       {"m", r.m},
                       {"r", r.r},
                       {"variant", r.variant},
                       {"algo", r.algo},
                       {"count", r.count},
                       {"main_term", r.main_term},
                       {"residual", r.residual},
                       {"residual_norm_1", r.residual_norm_1},
                       {"residual_norm_half", r.residual_norm_half},
                       {"millis", r.millis}});
    }
    out << arr.dump(2) << '\n';
}

std::vector<ScanRow> read_rows_json(std::istream& in) {
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<ScanRow> rows;
    for (const auto& j : arr) {
        ScanRow r;
        r.q = j.at("q").get<std::uint32_t>();
        r.p = j.at("p").get<std::uint32_t>();
        r.k = j.at("k").get<std::uint32_t>();
        r.m = j.at("m").get<std::uint32_t>();
        r.r = j.at("r").get<Fe>();
        r.variant = j.at("variant").get<std::string>();
        r.algo = j.at("algo").get<std::string>();
        r.count = j.at("count").get<std::uint64_t>();
        r.main_term = j.at("main_term").get<std::string>();
        r.residual = j.at("residual").get<std::string>();
        r.residual_norm_1 = j.at("residual_norm_1").get<double>();
        r.residual_norm_half = j.at("residual_norm_half").get<double>();
        r.millis = j.at("millis").get<std::int64_t>();
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace dioph
