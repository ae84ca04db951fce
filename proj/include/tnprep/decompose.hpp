#pragma once

// KAK (Cartan) decomposition of SU(4) gates and lowering of staircase
// circuits to {CX, H, S, Sdg, Z, X, RZ} rotation circuits.
//
// Any two-qubit unitary factors as
//   u = phase * (post_a (x) post_b) * exp(i (x XX + y YY + z ZZ))
//             * (pre_a (x) pre_b)
// with canonical Weyl-chamber angles pi/4 >= x >= y >= |z| (and z >= 0 when
// x = pi/4). The interaction part lowers to three CX-conjugated RZ blocks;
// one-qubit factors lower via ZYZ Euler angles with Ry expressed through
// Clifford-conjugated RZ. Global phase is tracked exactly end to end.

#include <array>
#include <string>
#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/circuit.hpp"

namespace tnprep {

struct KakDecomposition {
  Mat2 pre_a, pre_b;    // applied first
  Mat2 post_a, post_b;  // applied last
  double x = 0.0, y = 0.0, z = 0.0;
  cplx phase = 1.0;
};

// Canonical angles and local factors of a 4x4 unitary (unitarity checked to
// 1e-10). Reconstruction error is kept below 1e-9 in max norm.
KakDecomposition kak_decompose(const Mat4& u);

// exp(i (x XX + y YY + z ZZ)) in the 2*q_i + q_j basis.
Mat4 canonical_gate(double x, double y, double z);

// ZYZ Euler angles: u = e^{i phi} Rz(alpha) Ry(beta) Rz(gamma),
// returned as {alpha, beta, gamma, phi}. Rz(t) = exp(-i t Z / 2).
std::array<double, 4> zyz_angles(const Mat2& u);

// Rotation-level ops. RZ carries the only continuous parameter; everything
// else is Clifford. Ops act on `wires` (CX = {control, target}).
enum class RotOpKind { kRz, kH, kS, kSdg, kZ, kX, kCx, kCz };

struct RotOp {
  RotOpKind kind = RotOpKind::kRz;
  std::vector<int> wires;
  double theta = 0.0;  // kRz only
};

struct RotationCircuit {
  int n_qubits = 0;
  std::vector<RotOp> ops;  // applied front to back
  cplx phase = 1.0;        // exact global phase of the represented unitary
  int n_rz() const {
    int n = 0;
    for (const auto& o : ops) n += (o.kind == RotOpKind::kRz);
    return n;
  }
};

struct LowerReport {
  std::vector<int> rz_per_gate;  // raw RZ emitted around each gate, in order
  int merged_blocks = 0;         // wire junctions fused into one ZYZ block
};

// Lower every SU(4) gate through KAK. merge=true multiplies the pending
// single-qubit factor on each wire (the previous gate's post) into the next
// gate's pre and re-factorizes by ZYZ, so at most 9 raw RZ are attributed to
// a gate with successors on both wires and 15 to one with none.
// elide_tol snaps RZ angles within tol of {0, +-pi/2, pi} to
// {drop, S/Sdg, Z} with the phase folded into RotationCircuit::phase.
RotationCircuit lower_circuit(const StaircaseCircuit& c, bool merge,
                              double elide_tol, LowerReport* report = nullptr);

// Drop RZ with |angle| <= angle_tol, snap angles within angle_tol of
// +-pi/2 or pi to S/Sdg/Z; the exact phase of each snap folds into phase.
RotationCircuit elide_trivial_rotations(const RotationCircuit& r,
                                        double angle_tol);

// Dense unitary of a rotation circuit including its phase (n_qubits <= 10;
// big-endian wire order).
Mat rotation_circuit_unitary(const RotationCircuit& c);

// ROTC1 text format: header "ROTC1 <n_qubits>", one op per line
// ("RZ <wire> <theta>", "CX <c> <t>", "CZ <a> <b>", "H|S|SDG|Z|X <wire>"),
// trailing "PHASE <re> <im>". Lowering emits CX only; CZ is accepted on parse.
std::string serialize_rotation_circuit(const RotationCircuit& c);
RotationCircuit parse_rotation_circuit(const std::string& text);
void save_rotation_circuit(const RotationCircuit& c, const std::string& path);
RotationCircuit load_rotation_circuit(const std::string& path);

}  // namespace tnprep
