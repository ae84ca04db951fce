#pragma once

// V-shaped staircase circuits of SU(4) gates and their variational
// compilation against a target MPS.
//
// A staircase layer touches every nearest-neighbour bond once, ordered so the
// sweep starts at the centre bond, descends to (0,1), then ascends to
// (n-2,n-1) — the "V". New layers are prepended (applied to |0...0> first) so
// each optimizes against the residual the existing layers do not capture.
// Gate updates are Evenbly-Vidal polar updates: with E the environment of a
// gate (overlap with the gate removed), the overlap-maximizing replacement is
// g = V W^dagger from the SVD E^T = W S V^dagger.

#include <cstdint>
#include <string>
#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/mps.hpp"

namespace tnprep {

struct Su4Gate {
  int layer = 0;
  int i = 0;  // acts on qubits (i, j) = (i, i+1)
  int j = 0;
  Mat4 u;     // unitary, row/col index = 2*q_i + q_j (big-endian pair)
};

struct StaircaseCircuit {
  int n_qubits = 0;
  int center_bond = 0;  // bond c where each layer's V starts, gate (c, c+1)
  std::vector<std::vector<Su4Gate>> layers;  // layers[0] applied first

  int n_gates() const {
    int n = 0;
    for (const auto& l : layers) n += static_cast<int>(l.size());
    return n;
  }
};

struct CompileReport {
  std::vector<double> overlaps_per_layer;  // |<target|C|0>| after each growth
  std::vector<int> sweeps_per_stage;
  double final_overlap = 0.0;
};

// Bond order (i, i+1) of one V-shaped layer for the given centre bond.
std::vector<std::pair<int, int>> vshape_layer_order(int n_qubits,
                                                    int center_bond);

// Apply the full circuit to |0...0> as an MPS (chi_max 0 = exact).
Mps circuit_to_state(const StaircaseCircuit& c, int chi_max, double sv_tol);

// One back-and-forth polar-update sweep over every gate; returns
// |<target|C|0>| after the sweep. chi_env bounds the cached top/bottom
// environment MPS (0 = exact).
double optimize_sweep(StaircaseCircuit& c, const Mps& target, int chi_env);

// Grow layer by layer (up to max_layers), sweeping each stage until the
// overlap's relative gain drops below rel_tol. chi_env 0 picks
// 2 * target.max_bond(). center_bond -1 picks the target's largest bond.
// seed randomizes the initial gate of each fresh layer.
StaircaseCircuit grow_and_compile(const Mps& target, int max_layers,
                                  double rel_tol, int chi_env,
                                  CompileReport* report = nullptr,
                                  int center_bond = -1,
                                  std::uint64_t seed = 0);

// SU4C1 text format: header "SU4C1 <n_qubits> <center_bond> <n_layers>",
// then one "G <layer> <i> <j>" line per gate followed by its 16 row-major
// "re im" entries, gates in application order.
std::string serialize_circuit(const StaircaseCircuit& c);
StaircaseCircuit parse_circuit(const std::string& text);
void save_circuit(const StaircaseCircuit& c, const std::string& path);
StaircaseCircuit load_circuit(const std::string& path);

}  // namespace tnprep
