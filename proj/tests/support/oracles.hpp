#pragma once

// Independent reference implementations for tests. These deliberately avoid
// the library's contraction/enumeration code paths: statevectors come from
// per-bitstring chain products, gate simulation works on amplitudes with bit
// arithmetic, and minimal T-counts come from a breadth-first closure over
// {H, S, T} words.

#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/mps.hpp"

namespace tnprep::testing {

// Amplitude of every bitstring via an explicit matrix-chain product.
Vec mps_statevector_oracle(const Mps& psi);

// In-place dense gate application (big-endian wires, wire 0 = MSB).
void apply_1q_dense(Vec* state, const Mat2& g, int wire, int n_qubits);
void apply_2q_dense(Vec* state, const Mat4& g, int a, int b, int n_qubits);

// Phase-invariant distance sqrt(1 - |tr(u^dag v)| / dim).
double phase_dist(const Mat& u, const Mat& v);

// Exhaustive single-qubit Clifford+T group closure up to max_t T gates,
// built by alternating {H,S} closure and T application on {H,S,T} words.
class CtBfsOracle {
 public:
  explicit CtBfsOracle(int max_t);
  // Minimal T-count of any enumerated operator within eps of target
  // (phase-invariant); -1 when none qualifies.
  int min_tcount_within(const Mat2& target, double eps) const;
  std::size_t size() const { return ops_.size(); }
  std::size_t count_at(int t) const;

 private:
  std::vector<std::pair<Mat2, int>> ops_;  // (representative, t_count)
};

}  // namespace tnprep::testing
