#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace als {

/** One benchmark run, as serialized to CSV/JSON. For parallel runs the
 *  search counters are the winning worker's (worker 0's when unsolved). */
struct RunRecord {
  int run_id = 0;
  std::string problem;
  int n = 0;
  std::string variant;
  int workers = 1;
  std::uint64_t k = 0;
  std::uint64_t seed = 0;
  bool solved = false;
  double wall_ms = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t local_minima = 0;
  std::uint64_t resets = 0;
  std::uint64_t restarts = 0;
  double same_var_avg = 0.0;
  int winner_rank = -1;
  std::uint64_t adoptions = 0;
  std::uint64_t propagations = 0;

  bool operator==(const RunRecord&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "run_id,problem,n,variant,workers,k,seed,solved,wall_ms,iterations,local_minima,"
    "resets,restarts,same_var_avg,winner_rank,adoptions,propagations";

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad double field: " + std::string(text));
  return value;
}

template <typename Int>
inline Int parse_int(std::string_view text) {
  Int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad integer field: " + std::string(text));
  return value;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

inline std::string to_csv_row(const RunRecord& r) {
  std::ostringstream out;
  out << r.run_id << ',' << r.problem << ',' << r.n << ',' << r.variant << ',' << r.workers
      << ',' << r.k << ',' << r.seed << ',' << (r.solved ? 1 : 0) << ','
      << detail::format_double(r.wall_ms) << ',' << r.iterations << ',' << r.local_minima
      << ',' << r.resets << ',' << r.restarts << ',' << detail::format_double(r.same_var_avg)
      << ',' << r.winner_rank << ',' << r.adoptions << ',' << r.propagations;
  return out.str();
}

inline RunRecord parse_csv_row(std::string_view line) {
  const auto f = detail::split_csv(line);
  if (f.size() != 17)
    throw std::invalid_argument("expected 17 CSV fields, got " + std::to_string(f.size()));
  RunRecord r;
  r.run_id = detail::parse_int<int>(f[0]);
  r.problem = std::string(f[1]);
  r.n = detail::parse_int<int>(f[2]);
  r.variant = std::string(f[3]);
  r.workers = detail::parse_int<int>(f[4]);
  r.k = detail::parse_int<std::uint64_t>(f[5]);
  r.seed = detail::parse_int<std::uint64_t>(f[6]);
  r.solved = detail::parse_int<int>(f[7]) != 0;
  r.wall_ms = detail::parse_double(f[8]);
  r.iterations = detail::parse_int<std::uint64_t>(f[9]);
  r.local_minima = detail::parse_int<std::uint64_t>(f[10]);
  r.resets = detail::parse_int<std::uint64_t>(f[11]);
  r.restarts = detail::parse_int<std::uint64_t>(f[12]);
  r.same_var_avg = detail::parse_double(f[13]);
  r.winner_rank = detail::parse_int<int>(f[14]);
  r.adoptions = detail::parse_int<std::uint64_t>(f[15]);
  r.propagations = detail::parse_int<std::uint64_t>(f[16]);
  return r;
}

inline void to_json(nlohmann::json& j, const RunRecord& r) {
  j = nlohmann::json{{"run_id", r.run_id},
                     {"problem", r.problem},
                     {"n", r.n},
                     {"variant", r.variant},
                     {"workers", r.workers},
                     {"k", r.k},
                     {"seed", r.seed},
                     {"solved", r.solved},
                     {"wall_ms", r.wall_ms},
                     {"iterations", r.iterations},
                     {"local_minima", r.local_minima},
                     {"resets", r.resets},
                     {"restarts", r.restarts},
                     {"same_var_avg", r.same_var_avg},
                     {"winner_rank", r.winner_rank},
                     {"adoptions", r.adoptions},
                     {"propagations", r.propagations}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
  j.at("run_id").get_to(r.run_id);
  j.at("problem").get_to(r.problem);
  j.at("n").get_to(r.n);
  j.at("variant").get_to(r.variant);
  j.at("workers").get_to(r.workers);
  j.at("k").get_to(r.k);
  j.at("seed").get_to(r.seed);
  j.at("solved").get_to(r.solved);
  j.at("wall_ms").get_to(r.wall_ms);
  j.at("iterations").get_to(r.iterations);
  j.at("local_minima").get_to(r.local_minima);
  j.at("resets").get_to(r.resets);
  j.at("restarts").get_to(r.restarts);
  j.at("same_var_avg").get_to(r.same_var_avg);
  j.at("winner_rank").get_to(r.winner_rank);
  j.at("adoptions").get_to(r.adoptions);
  j.at("propagations").get_to(r.propagations);
}

inline double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

/** Aggregates over the solved rows only; solve_rate records how many rows
 *  that covers. */
struct Aggregate {
  int runs = 0;
  int solved_runs = 0;
  double solve_rate = 0.0;
  double wall_ms_mean = 0.0;
  double wall_ms_median = 0.0;
  double wall_ms_min = 0.0;
  double wall_ms_max = 0.0;
  double iterations_mean = 0.0;
  double local_minima_mean = 0.0;
  double resets_mean = 0.0;
  double restarts_mean = 0.0;
  double same_var_mean = 0.0;
};

inline Aggregate aggregate_rows(const std::vector<RunRecord>& rows) {
  Aggregate a;
  a.runs = static_cast<int>(rows.size());
  std::vector<double> walls;
  for (const RunRecord& r : rows) {
    if (!r.solved) continue;
    ++a.solved_runs;
    walls.push_back(r.wall_ms);
    a.wall_ms_mean += r.wall_ms;
    a.iterations_mean += static_cast<double>(r.iterations);
    a.local_minima_mean += static_cast<double>(r.local_minima);
    a.resets_mean += static_cast<double>(r.resets);
    a.restarts_mean += static_cast<double>(r.restarts);
    a.same_var_mean += r.same_var_avg;
  }
  if (a.runs > 0) a.solve_rate = static_cast<double>(a.solved_runs) / a.runs;
  if (a.solved_runs > 0) {
    const double s = a.solved_runs;
    a.wall_ms_mean /= s;
    a.iterations_mean /= s;
    a.local_minima_mean /= s;
    a.resets_mean /= s;
    a.restarts_mean /= s;
    a.same_var_mean /= s;
    a.wall_ms_median = median_of(walls);
    a.wall_ms_min = *std::min_element(walls.begin(), walls.end());
    a.wall_ms_max = *std::max_element(walls.begin(), walls.end());
  }
  return a;
}

inline void to_json(nlohmann::json& j, const Aggregate& a) {
  j = nlohmann::json{{"runs", a.runs},
                     {"solved_runs", a.solved_runs},
                     {"solve_rate", a.solve_rate},
                     {"wall_ms_mean", a.wall_ms_mean},
                     {"wall_ms_median", a.wall_ms_median},
                     {"wall_ms_min", a.wall_ms_min},
                     {"wall_ms_max", a.wall_ms_max},
                     {"iterations_mean", a.iterations_mean},
                     {"local_minima_mean", a.local_minima_mean},
                     {"resets_mean", a.resets_mean},
                     {"restarts_mean", a.restarts_mean},
                     {"same_var_mean", a.same_var_mean}};
}

/** CSV layout: header row, one line per run, then aggregate footer lines
 *  prefixed with '#' (one per k value), which parsers skip. */
inline void write_csv(std::ostream& out, const std::vector<RunRecord>& rows,
                      const std::vector<std::pair<std::uint64_t, Aggregate>>& aggregates = {}) {
  out << kCsvHeader << '\n';
  for (const RunRecord& r : rows) out << to_csv_row(r) << '\n';
  for (const auto& [k, a] : aggregates) {
    out << "# aggregate k=" << k << " runs=" << a.runs << " solved=" << a.solved_runs
        << " solve_rate=" << detail::format_double(a.solve_rate)
        << " wall_ms_mean=" << detail::format_double(a.wall_ms_mean)
        << " wall_ms_median=" << detail::format_double(a.wall_ms_median)
        << " wall_ms_min=" << detail::format_double(a.wall_ms_min)
        << " wall_ms_max=" << detail::format_double(a.wall_ms_max)
        << " iterations_mean=" << detail::format_double(a.iterations_mean)
        << " local_minima_mean=" << detail::format_double(a.local_minima_mean)
        << " resets_mean=" << detail::format_double(a.resets_mean)
        << " restarts_mean=" << detail::format_double(a.restarts_mean)
        << " same_var_mean=" << detail::format_double(a.same_var_mean) << '\n';
  }
}

inline std::vector<RunRecord> read_csv(std::istream& in) {
  std::vector<RunRecord> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first && line == kCsvHeader) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(parse_csv_row(line));
  }
  return rows;
}

inline void write_csv_file(const std::string& path, const std::vector<RunRecord>& rows,
                           const std::vector<std::pair<std::uint64_t, Aggregate>>& aggregates = {}) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(out, rows, aggregates);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<RunRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_csv(in);
}

inline void write_json_file(const std::string& path, const std::vector<RunRecord>& rows,
                            const std::vector<std::pair<std::uint64_t, Aggregate>>& aggregates = {}) {
  nlohmann::json j;
  j["runs"] = rows;
  auto& aggs = j["aggregates"] = nlohmann::json::array();
  for (const auto& [k, a] : aggregates) {
    nlohmann::json entry = a;
    entry["k"] = k;
    aggs.push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<RunRecord> read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  nlohmann::json j;
  in >> j;
  return j.at("runs").get<std::vector<RunRecord>>();
}

/** Median-time comparison of two result files; 1.0 when they are equal. */
struct SpeedupRow {
  int baseline_solved = 0;
  int parallel_solved = 0;
  double baseline_median_ms = 0.0;
  double parallel_median_ms = 0.0;
  double speedup = 0.0;
};

inline SpeedupRow compute_speedup(const std::vector<RunRecord>& baseline,
                                  const std::vector<RunRecord>& parallel) {
  SpeedupRow row;
  std::vector<double> base_walls, par_walls;
  for (const auto& r : baseline)
    if (r.solved) base_walls.push_back(r.wall_ms);
  for (const auto& r : parallel)
    if (r.solved) par_walls.push_back(r.wall_ms);
  row.baseline_solved = static_cast<int>(base_walls.size());
  row.parallel_solved = static_cast<int>(par_walls.size());
  row.baseline_median_ms = median_of(std::move(base_walls));
  row.parallel_median_ms = median_of(std::move(par_walls));
  if (row.parallel_median_ms > 0.0)
    row.speedup = row.baseline_median_ms / row.parallel_median_ms;
  return row;
}

}  // namespace als
