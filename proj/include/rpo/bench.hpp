#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpo/circuit.hpp"
#include "rpo/routing.hpp"

namespace rpo {

enum class OracleKind { Boolean, Phase };

/// Bernstein-Vazirani for hidden string `s` ('0'/'1'; s[i] belongs to data
/// qubit i). Boolean: n + 1 qubits with the ancilla last, prepared by X then
/// H, one CX per set bit. Phase: n qubits, one Z per set bit. Data qubit i is
/// measured into clbit i.
Circuit gen_bv(const std::string& s, OracleKind kind);

/// Phase estimation with n counting qubits (qubit k carries U^(2^k)), the
/// eigenvector |1> of U = u1(2 pi theta) on qubit n, inverse QFT, and
/// measurement of the counting register. For theta = m / 2^n the outcome is m.
Circuit gen_qpe(int n, double theta);

struct GroverOptions {
  /// Realize each multi-controlled Z with a V-chain of Toffolis over n - 3
  /// clean ancillas (placed after the data qubits).
  bool clean_ancilla = false;
  /// With clean_ancilla: ANNOT(0, 0) on every ancilla after it is uncomputed.
  bool annotate = true;
};

/// Grover search over n data qubits for `marked` (bit i = data qubit i).
Circuit gen_grover(int n, std::uint64_t marked, int iterations, GroverOptions options = {});

/// Closed-form success probability sin^2((2k + 1) asin(2^(-n/2))).
double grover_success_probability(int n, int iterations);

/// Hardware-efficient RY ansatz: depth + 1 rotation layers (u3(t, 0, 0))
/// separated by linear CX chains. params.size() must be n * (depth + 1).
Circuit gen_vqe_ry(int n, int depth, const std::vector<double>& params);
Circuit gen_vqe_ry(int n, int depth, std::uint64_t seed);

/// depth layers of random pairings; each pair gets u3, u3, CX, u3, CX, u3
/// with random angles.
Circuit gen_qv_like(int n, int depth, std::uint64_t seed);

enum class Algorithm { Bv, Qpe, Grover, VqeRy, QvLike };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct BenchSpec {
  Algorithm algorithm = Algorithm::Qpe;
  int n = 4;
  std::optional<CouplingMap> coupling;
  int repetitions = 25;
  /// Transpilation seeds are seed, seed + 1, ...; generator randomness
  /// (hidden string, marked element, angles) uses `seed` only.
  std::uint64_t seed = 1;
  double qpe_theta = 1.0 / 3.0;
  int ansatz_depth = 2;
  bool verify = true;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// The benchmark circuit a spec describes.
Circuit bench_circuit(const BenchSpec& spec);

struct ReportRow {
  std::string benchmark;
  int n = 0;
  std::string pipeline;  // "baseline" or "rpo"
  std::size_t cx = 0;
  std::size_t u1q = 0;
  std::size_t depth = 0;
  double ms = 0.0;
  std::uint64_t seed = 0;
};

class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, std::string circuit_text)
      : std::runtime_error(what), circuit_text_(std::move(circuit_text)) {}
  const std::string& circuit_text() const { return circuit_text_; }

 private:
  std::string circuit_text_;
};

/// Transpiles the benchmark once per seed with the baseline pipeline and with
/// RPO (QBO, QPO and block re-synthesis), checking each result against the
/// input with the oracle when the benchmark has at most 12 qubits. Rows are
/// ordered by seed, baseline first.
std::vector<ReportRow> run_bench(const BenchSpec& spec);

inline constexpr const char* kCsvHeader = "benchmark,n,pipeline,cx,u1q,depth,ms,seed";

void write_csv(const std::vector<ReportRow>& rows, std::ostream& out);

struct SummaryRow {
  std::string benchmark;
  int n = 0;
  double baseline_cx = 0, rpo_cx = 0;
  double baseline_u1q = 0, rpo_u1q = 0;
  double baseline_depth = 0, rpo_depth = 0;
  double baseline_ms = 0, rpo_ms = 0;
};

/// Medians per (benchmark, n).
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace rpo
