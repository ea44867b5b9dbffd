#include "rpo/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rpo/oracle.hpp"
#include "rpo/pipeline.hpp"
#include "rpo/qasm.hpp"

namespace rpo {

Circuit gen_bv(const std::string& s, OracleKind kind) {
  if (s.empty()) throw std::invalid_argument("gen_bv: empty hidden string");
  if (s.find_first_not_of("01") != std::string::npos) {
    throw std::invalid_argument("gen_bv: hidden string must consist of 0 and 1");
  }
  const int n = static_cast<int>(s.size());
  const bool boolean = kind == OracleKind::Boolean;
  Circuit c(boolean ? n + 1 : n, n);
  if (boolean) {
    c.append(gates::x(n));
    c.append(gates::h(n));
  }
  for (int i = 0; i < n; ++i) c.append(gates::h(i));
  for (int i = 0; i < n; ++i) {
    if (s[static_cast<std::size_t>(i)] != '1') continue;
    c.append(boolean ? gates::cx(i, n) : gates::z(i));
  }
  for (int i = 0; i < n; ++i) c.append(gates::h(i));
  for (int i = 0; i < n; ++i) c.append(gates::measure(i, i));
  return c;
}

Circuit gen_qpe(int n, double theta) {
  if (n < 2) throw std::invalid_argument("gen_qpe: needs at least two counting qubits");
  Circuit c(n + 1, n);
  c.append(gates::x(n));
  for (int k = 0; k < n; ++k) c.append(gates::h(k));
  for (int k = 0; k < n; ++k) {
    // Controlled u1(2 pi theta 2^k).
    c.append(gates::cu3(0.0, 0.0, kTwoPi * theta * std::ldexp(1.0, k), k, n));
  }
  for (int i = 0; i < n / 2; ++i) c.append(gates::swap(i, n - 1 - i));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      c.append(gates::cu3(0.0, 0.0, -kPi / std::ldexp(1.0, j - k), j, k));
    }
    c.append(gates::h(j));
  }
  for (int k = 0; k < n; ++k) c.append(gates::measure(k, k));
  return c;
}

namespace {

struct GroverBuilder {
  Circuit& c;
  int n;
  GroverOptions options;

  std::vector<int> ancillas() const {
    std::vector<int> a;
    for (int i = n; i < c.num_qubits(); ++i) a.push_back(i);
    return a;
  }

  // Multi-controlled X; bit i of `open` marks control i as open.
  void mcx(const std::vector<int>& controls, int target, std::uint32_t open) {
    const std::size_t k = controls.size();
    if (k == 1) {
      c.append(Instruction(GateKind::CX, {controls[0], target}, {}, {}, open));
      return;
    }
    if (k == 2 || !options.clean_ancilla) {
      c.append(gates::mcx(controls, target, open));
      return;
    }
    const auto anc = ancillas();
    auto bit = [&](std::size_t i) { return (open >> i) & 1u; };
    std::vector<Instruction> compute;
    compute.emplace_back(GateKind::CCX, std::vector<int>{controls[0], controls[1], anc[0]},
                         std::vector<double>{}, std::vector<int>{}, bit(0) | (bit(1) << 1));
    for (std::size_t i = 2; i + 1 < k; ++i) {
      compute.emplace_back(GateKind::CCX, std::vector<int>{controls[i], anc[i - 2], anc[i - 1]},
                           std::vector<double>{}, std::vector<int>{}, bit(i));
    }
    for (const auto& g : compute) c.append(g);
    c.append(Instruction(GateKind::CCX, {controls[k - 1], anc[k - 3], target}, {}, {}, bit(k - 1)));
    for (auto it = compute.rbegin(); it != compute.rend(); ++it) c.append(*it);
    if (options.annotate) {
      for (std::size_t i = 0; i + 2 < k; ++i) c.append(gates::annot(0.0, 0.0, anc[i]));
    }
  }

  // Phase flip of the data basis state whose bits equal `pattern`.
  void mcz(std::uint64_t pattern) {
    const int t = n - 1;
    const bool t_open = ((pattern >> t) & 1u) == 0;
    std::vector<int> controls;
    std::uint32_t open = 0;
    for (int i = 0; i < t; ++i) {
      controls.push_back(i);
      if (((pattern >> i) & 1u) == 0) open |= 1u << i;
    }
    if (t_open) c.append(gates::x(t));
    c.append(gates::h(t));
    mcx(controls, t, open);
    c.append(gates::h(t));
    if (t_open) c.append(gates::x(t));
  }
};

}  // namespace

Circuit gen_grover(int n, std::uint64_t marked, int iterations, GroverOptions options) {
  if (n < 2) throw std::invalid_argument("gen_grover: needs at least two qubits");
  if (n > 20 || marked >= (std::uint64_t{1} << n)) {
    throw std::invalid_argument("gen_grover: marked element out of range");
  }
  if (iterations < 1) throw std::invalid_argument("gen_grover: needs at least one iteration");
  const int n_anc = options.clean_ancilla ? std::max(0, n - 3) : 0;
  Circuit c(n + n_anc, n);
  GroverBuilder b{c, n, options};
  for (int i = 0; i < n; ++i) c.append(gates::h(i));
  for (int it = 0; it < iterations; ++it) {
    b.mcz(marked);
    for (int i = 0; i < n; ++i) c.append(gates::h(i));
    b.mcz(0);
    for (int i = 0; i < n; ++i) c.append(gates::h(i));
  }
  for (int i = 0; i < n; ++i) c.append(gates::measure(i, i));
  return c;
}

double grover_success_probability(int n, int iterations) {
  const double a = std::asin(std::pow(2.0, -n / 2.0));
  const double s = std::sin((2 * iterations + 1) * a);
  return s * s;
}

Circuit gen_vqe_ry(int n, int depth, const std::vector<double>& params) {
  if (n < 1 || depth < 0) throw std::invalid_argument("gen_vqe_ry: bad size");
  if (params.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(depth + 1)) {
    throw std::invalid_argument(fmt::format("gen_vqe_ry: expected {} parameters, got {}",
                                            n * (depth + 1), params.size()));
  }
  Circuit c(n);
  std::size_t p = 0;
  for (int layer = 0; layer <= depth; ++layer) {
    if (layer > 0) {
      for (int i = 0; i + 1 < n; ++i) c.append(gates::cx(i, i + 1));
    }
    for (int i = 0; i < n; ++i) c.append(gates::u3(params[p++], 0.0, 0.0, i));
  }
  return c;
}

Circuit gen_vqe_ry(int n, int depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<double> params(static_cast<std::size_t>(n) * static_cast<std::size_t>(depth + 1));
  for (auto& x : params) x = angle(rng);
  return gen_vqe_ry(n, depth, params);
}

Circuit gen_qv_like(int n, int depth, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_qv_like: needs at least two qubits");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  auto u3 = [&](int q) {
    const double t = angle(rng);
    const double p = angle(rng);
    const double l = angle(rng);
    return gates::u3(t, p, l, q);
  };
  Circuit c(n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int layer = 0; layer < depth; ++layer) {
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i + 1 < n; i += 2) {
      const int a = perm[static_cast<std::size_t>(i)];
      const int b = perm[static_cast<std::size_t>(i + 1)];
      c.append(u3(a));
      c.append(u3(b));
      c.append(gates::cx(a, b));
      c.append(u3(a));
      c.append(gates::cx(b, a));
      c.append(u3(b));
    }
  }
  return c;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Bv:
      return "bv";
    case Algorithm::Qpe:
      return "qpe";
    case Algorithm::Grover:
      return "grover";
    case Algorithm::VqeRy:
      return "vqe_ry";
    case Algorithm::QvLike:
      return "qv_like";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::Bv, Algorithm::Qpe, Algorithm::Grover, Algorithm::VqeRy,
                      Algorithm::QvLike}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

Circuit bench_circuit(const BenchSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  switch (spec.algorithm) {
    case Algorithm::Bv: {
      // Nonzero hidden string.
      const std::uint64_t bits = std::uniform_int_distribution<std::uint64_t>(
          1, (std::uint64_t{1} << spec.n) - 1)(rng);
      std::string s(static_cast<std::size_t>(spec.n), '0');
      for (int i = 0; i < spec.n; ++i) {
        if (((bits >> i) & 1u) != 0) s[static_cast<std::size_t>(i)] = '1';
      }
      return gen_bv(s, OracleKind::Boolean);
    }
    case Algorithm::Qpe:
      return gen_qpe(spec.n, spec.qpe_theta);
    case Algorithm::Grover: {
      const std::uint64_t marked = std::uniform_int_distribution<std::uint64_t>(
          0, (std::uint64_t{1} << spec.n) - 1)(rng);
      const int iterations = std::max(
          1, static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(std::ldexp(1.0, spec.n)))));
      return gen_grover(spec.n, marked, iterations, GroverOptions{true, true});
    }
    case Algorithm::VqeRy:
      return gen_vqe_ry(spec.n, spec.ansatz_depth, spec.seed);
    case Algorithm::QvLike:
      return gen_qv_like(spec.n, spec.n, spec.seed);
  }
  throw std::invalid_argument("unknown algorithm");
}

namespace {

constexpr int kMaxVerifiedQubits = 12;

// Drops physical wires the routed circuit never touches (they stay |0>), so
// routed results on large maps remain simulable.
void verify(const Circuit& original, const PipelineResult& r, const std::string& label) {
  std::vector<int> used;
  for (int p : r.final_layout) used.push_back(p);
  for (const auto& inst : r.circuit) used.insert(used.end(), inst.qubits.begin(), inst.qubits.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  if (static_cast<int>(used.size()) > kMaxSimQubits) return;
  auto compact = [&](int p) {
    return static_cast<int>(std::lower_bound(used.begin(), used.end(), p) - used.begin());
  };
  Circuit small(static_cast<int>(used.size()), r.circuit.num_clbits());
  for (auto inst : r.circuit) {
    for (int& q : inst.qubits) q = compact(q);
    small.append(std::move(inst));
  }
  std::vector<int> layout;
  for (int p : r.final_layout) layout.push_back(compact(p));
  const EquivalenceReport rep = equivalent_with_layout(original, small, layout);
  if (!rep.equivalent) {
    throw VerificationError(
        fmt::format("{}: optimized circuit is not equivalent to its input ({})", label,
                    rep.detail.empty() ? std::string("no detail") : rep.detail.front()),
        emit_program(r.circuit));
  }
}

ReportRow measure_row(const BenchSpec& spec, const Circuit& input, const PipelineOptions& opts,
                      const char* name) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult r = pipeline(input, opts);
  const auto t1 = std::chrono::steady_clock::now();
  if (spec.verify && input.num_qubits() <= kMaxVerifiedQubits) {
    verify(input, r, fmt::format("{} n={} {} seed={}", to_string(spec.algorithm), spec.n, name,
                                 opts.seed));
  }
  ReportRow row;
  row.benchmark = std::string(to_string(spec.algorithm));
  row.n = spec.n;
  row.pipeline = name;
  row.cx = count_cx(r.circuit);
  row.u1q = count_1q(r.circuit);
  row.depth = depth(r.circuit);
  row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  row.seed = opts.seed;
  return row;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<ReportRow> run_bench(const BenchSpec& spec) {
  if (spec.repetitions < 1) throw std::invalid_argument("run_bench: repetitions must be >= 1");
  const Circuit input = bench_circuit(spec);
  const auto reps = static_cast<std::size_t>(spec.repetitions);
  std::vector<std::array<ReportRow, 2>> results(reps);

  auto job = [&](std::size_t r) {
    PipelineOptions rpo_opts;
    rpo_opts.coupling = spec.coupling;
    rpo_opts.seed = spec.seed + r;
    rpo_opts.enable_block_resynth = true;
    results[r][0] = measure_row(spec, input, baseline_options(rpo_opts), "baseline");
    results[r][1] = measure_row(spec, input, rpo_opts, "rpo");
  };

  unsigned workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(reps));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t r = next++; r < reps; r = next++) job(r);
    }));
  }
  for (auto& f : pool) f.get();

  std::vector<ReportRow> rows;
  for (auto& pair : results) {
    rows.push_back(std::move(pair[0]));
    rows.push_back(std::move(pair[1]));
  }
  return rows;
}

void write_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{:.3f},{}\n", r.benchmark, r.n, r.pipeline, r.cx, r.u1q,
               r.depth, r.ms, r.seed);
  }
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  struct Acc {
    std::vector<double> cx[2], u1q[2], depth[2], ms[2];
  };
  std::map<std::pair<std::string, int>, Acc> groups;
  std::vector<std::pair<std::string, int>> order;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.benchmark, r.n);
    if (!groups.contains(key)) order.push_back(key);
    Acc& a = groups[key];
    const int v = r.pipeline == "rpo" ? 1 : 0;
    a.cx[v].push_back(static_cast<double>(r.cx));
    a.u1q[v].push_back(static_cast<double>(r.u1q));
    a.depth[v].push_back(static_cast<double>(r.depth));
    a.ms[v].push_back(r.ms);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const Acc& a = groups[key];
    out.push_back({key.first, key.second, median(a.cx[0]), median(a.cx[1]), median(a.u1q[0]),
                   median(a.u1q[1]), median(a.depth[0]), median(a.depth[1]), median(a.ms[0]),
                   median(a.ms[1])});
  }
  return out;
}

void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
  auto pct = [](double base, double opt) {
    return base == 0.0 ? std::string("-") : fmt::format("{:+.1f}%", 100.0 * (opt - base) / base);
  };
  fmt::print(out, "{:<8} {:>3} | {:>7} {:>7} {:>7} | {:>7} {:>7} {:>7} | {:>6} {:>6} {:>7} | {:>8} {:>8}\n",
             "bench", "n", "cx", "cx_rpo", "delta", "1q", "1q_rpo", "delta", "depth", "d_rpo",
             "delta", "ms", "ms_rpo");
  for (const auto& r : rows) {
    fmt::print(out,
               "{:<8} {:>3} | {:>7} {:>7} {:>7} | {:>7} {:>7} {:>7} | {:>6} {:>6} {:>7} | {:>8.2f} {:>8.2f}\n",
               r.benchmark, r.n, r.baseline_cx, r.rpo_cx, pct(r.baseline_cx, r.rpo_cx),
               r.baseline_u1q, r.rpo_u1q, pct(r.baseline_u1q, r.rpo_u1q), r.baseline_depth,
               r.rpo_depth, pct(r.baseline_depth, r.rpo_depth), r.baseline_ms, r.rpo_ms);
  }
}

}  // namespace rpo
