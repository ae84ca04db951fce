#pragma once

// Approximate single-qubit Clifford+T synthesis with exact minimal T-count
// within the database budget.
//
// Every single-qubit Clifford+T operator has a unique Matsumoto-Amano normal
// form (T|e)(HT|SHT)* C with C one of the 24 phase-classes of Cliffords; its
// T-count is the word's T-count. The database stores every normal form with
// T-count t <= t_budget as a canonical-sign SU(2) quaternion plus a packed
// code that reconstructs the gate word. Search walks T-count levels in
// ascending order: levels <= t_budget are queried directly; levels
// t_budget < tau <= 2*t_budget use the unique split of a tau-count word after
// its (tau - t_budget)-th T, i.e. A from the identity-Clifford sublevel and B
// from the epsilon-leading sublevel of the top level. Hits are re-verified
// from the reconstructed gate product, so the first level with a verified hit
// gives the exact minimal T-count within the effective budget.
//
// Distance metric throughout: d(U,V) = sqrt(1 - |tr(U^dag V)|/2), global-
// phase invariant. For unit quaternions ||p -+ q||^2 = 2 d^2, so a KD-tree
// ball query of radius sqrt(2)*eps around +-p is exact (no grid quantization).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/decompose.hpp"

namespace tnprep {

enum class CtGateKind { kH, kS, kSdg, kT, kTdg, kX, kZ, kCx };

// Single-qubit synthesis result. `gates` is in application order (first
// applied first); the represented operator is gates[n-1] * ... * gates[0]
// and target ~= e^{i global_phase} * that product.
struct CliffordTSequence {
  std::vector<CtGateKind> gates;
  int t_count = 0;
  double achieved_error = 0.0;
  double global_phase = 0.0;
};

struct NormalForm {
  std::array<double, 4> q{};  // canonical-sign quaternion (Re a, Im a, Re b, Im b)
  std::uint32_t code = 0;     // packed (leading T, syllable bits, clifford index)
};

// Static 4D KD-tree over quaternions (index array, median splits).
class QuatKdTree {
 public:
  void build(const std::vector<NormalForm>& entries, std::vector<int> subset);
  // Appends entry indices with ||q - p|| <= radius to out.
  void query(const std::array<double, 4>& p, double radius,
             std::vector<int>* out) const;
  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    std::array<double, 4> q;
    int entry = -1;
    int left = -1, right = -1;
    int axis = 0;
  };
  int build_rec(std::vector<int>& idx, int lo, int hi, int depth,
                const std::vector<NormalForm>& entries);
  std::vector<Node> nodes_;
  int root_ = -1;
};

struct SynthesisDatabase {
  int t_budget = 0;
  std::vector<std::vector<NormalForm>> levels;  // levels[t], t in 0..t_budget
  std::vector<QuatKdTree> level_trees;
  std::vector<std::vector<int>> identity_clifford;  // per level: A-set indices
  QuatKdTree split_tree;  // epsilon-leading subset of levels[t_budget]

  std::size_t n_entries() const {
    std::size_t n = 0;
    for (const auto& l : levels) n += l.size();
    return n;
  }
};

// Gate word of a packed code, application order. Word T-count, unitary.
std::vector<CtGateKind> decode_word(std::uint32_t code);
Mat2 ct_gate_matrix(CtGateKind k);
Mat2 word_unitary(const std::vector<CtGateKind>& gates);

// Phase-invariant distance sqrt(1 - |tr(U^dag V)|/2).
double ct_distance(const Mat2& u, const Mat2& v);

// Enumerates all Matsumoto-Amano normal forms up to t_budget (<= 14) and
// builds the acceleration structures. Deterministic.
SynthesisDatabase build_database(int t_budget);

// Binary cache ("CTDB1", versioned, keyed by t_budget): load if compatible,
// else build and save. Empty path = always build.
SynthesisDatabase load_or_build_database(int t_budget, const std::string& cache_path);
void save_database(const SynthesisDatabase& db, const std::string& path);

// eps-approximation of RZ(theta) = exp(-i theta Z / 2) with exact minimal
// T-count within the effective budget 2*t_budget. Throws SynthesisError
// carrying the best (error, t_count) when eps is unreachable.
CliffordTSequence synth_rz(double theta, double eps, const SynthesisDatabase& db);

// Same machinery keyed on an arbitrary 2x2 unitary.
CliffordTSequence synth_u3(const Mat2& u, double eps, const SynthesisDatabase& db);

enum class SynthesisStrategy { kRzOnly, kHybrid };

struct CtOp {
  CtGateKind kind = CtGateKind::kH;
  int a = 0;       // wire (control for kCx)
  int b = -1;      // target for kCx, else -1
};

struct CliffordTCircuit {
  int n_qubits = 0;
  std::vector<CtOp> ops;  // applied front to back
  cplx phase = 1.0;
  int t_count() const {
    int n = 0;
    for (const auto& o : ops)
      n += (o.kind == CtGateKind::kT || o.kind == CtGateKind::kTdg);
    return n;
  }
};

struct SynthesizedCircuit {
  CliffordTCircuit circuit;
  int total_t_count = 0;
  std::vector<double> per_gate_errors;  // one per synthesized SU(2) target
};

// Replaces the continuous content of a rotation circuit by Clifford+T words.
// kRzOnly synthesizes each RZ independently; kHybrid collapses every maximal
// same-wire run of single-qubit ops containing >= 2 RZ into one SU(2) target
// first. Total operator error is bounded by the sum of per-gate errors.
SynthesizedCircuit synth_circuit(const RotationCircuit& r, double eps,
                                 SynthesisStrategy strategy,
                                 const SynthesisDatabase& db);

// Dense unitary including phase (n_qubits <= 10; big-endian wire order).
Mat clifford_t_unitary(const CliffordTCircuit& c);

// CTQ1 text format: header "CTQ1 <n_qubits> <t_count>", one gate per line
// ("H q", "S q", "SDG q", "T q", "TDG q", "X q", "Z q", "CX a b").
std::string serialize_ct_circuit(const CliffordTCircuit& c);
CliffordTCircuit parse_ct_circuit(const std::string& text);
void save_ct_circuit(const CliffordTCircuit& c, const std::string& path);
CliffordTCircuit load_ct_circuit(const std::string& path);

}  // namespace tnprep
