#pragma once

// Matrix-product states and operators over spin-1/2 sites (open boundary
// conditions), with canonical-form handling, variational compression, gate
// application and text serialization.
//
// Conventions:
//  - MpsTensor::m[s] is the chi_l x chi_r matrix for physical state s in {0,1}.
//  - Dense statevector indices are big-endian: site 0 is the most significant
//    bit, i.e. index = sum_i s_i * 2^(n-1-i).
//  - Two-site matricizations stack the physical index in front of the bond
//    index: row (s1, l) = s1*chi_l + l, column (s2, r) = s2*chi_r + r.
//  - An Mps represents |psi> = norm * (tensor contraction); canonicalize()
//    folds norm into the center tensor and resets it to 1.

#include <array>
#include <string>
#include <vector>

#include "tnprep/common.hpp"

namespace tnprep {

struct MpsTensor {
  std::array<Mat, 2> m;
  int chi_l() const { return static_cast<int>(m[0].rows()); }
  int chi_r() const { return static_cast<int>(m[0].cols()); }
};

struct Mps {
  std::vector<MpsTensor> tensors;
  int center = -1;    // canonical-center site; -1 when unknown
  double norm = 1.0;  // scalar prefactor

  int n_sites() const { return static_cast<int>(tensors.size()); }
  std::vector<int> bond_dims() const;  // the n_sites-1 interior bonds
  int max_bond() const;
};

struct MpoTensor {
  // w[s_out][s_in] is the wl x wr matrix of operator coefficients
  std::array<std::array<Mat, 2>, 2> w;
  int wl() const { return static_cast<int>(w[0][0].rows()); }
  int wr() const { return static_cast<int>(w[0][0].cols()); }
};

struct Mpo {
  std::vector<MpoTensor> tensors;
  int n_sites() const { return static_cast<int>(tensors.size()); }
  int max_bond() const;
};

// ---- construction ----

Mps product_state(const std::vector<int>& bits);

// ---- canonical form ----

// Moves the canonical center to `site` (QR sweeps from both ends; cheap when
// already partially canonical). Folds `norm` into the center tensor.
void canonicalize(Mps& psi, int site);

// One-shot SVD truncation pass (left-to-right on a right-canonicalized copy).
// Keeps at most chi_max singular values and drops those below sv_tol (absolute,
// on the unit-normalized state). Returns the total discarded weight sum(s^2).
double truncate(Mps& psi, int chi_max, double sv_tol);

void normalize(Mps& psi);

// ---- contractions ----

cplx overlap(const Mps& a, const Mps& b);  // <a|b> including norms

// Rayleigh quotient <psi|O|psi>/<psi|psi>. Errors if the imaginary part
// exceeds 1e-10 relative to the magnitude (signals a non-Hermitian MPO).
double expectation(const Mpo& op, const Mps& psi);

// Per-site occupation <n_i> (diagonal single-site expectations).
std::vector<double> site_occupations(const Mps& psi);

// ---- compression ----

// SVD-truncation initialization followed by n_sweeps two-site variational
// sweeps maximizing |<result|target>|. The result is unit-normalized.
Mps compress(const Mps& target, int chi_max, int n_sweeps);

// ---- gate application ----

// Applies a 4x4 unitary to sites (site, site+1). Errors if `g` is not unitary
// (tolerance 1e-10). The cut bond is truncated to chi_max (0 = unbounded) and
// sv_tol; returns the discarded weight. Leaves the center at site+1.
double apply_gate(Mps& psi, const Mat4& g, int site, int chi_max, double sv_tol);

void apply_1q(Mps& psi, const Mat2& g, int site);

// ---- dense conversions (small systems) ----

Vec mps_to_statevector(const Mps& psi);           // n_sites <= 24
Mps statevector_to_mps(const Vec& v, int chi_max, double sv_tol);
Mat mpo_to_dense(const Mpo& op);                  // n_sites <= 14

// ---- MPO algebra ----

Mpo mpo_sum(const Mpo& a, const Mpo& b);
// Bond compression via successive SVD truncation at relative cutoff rel_tol.
void mpo_compress(Mpo& op, double rel_tol);

// ---- serialization ("MPS1") ----
// Header "MPS1 <n_sites>", then per tensor a line "T <chi_l> <2> <chi_r>"
// followed by the tensor entries in row-major (l, s, r) order as "re im"
// pairs, one per line, 17 significant digits.

std::string serialize_mps(const Mps& psi);
Mps parse_mps(const std::string& text);
void save_mps(const Mps& psi, const std::string& path);
Mps load_mps(const std::string& path);

}  // namespace tnprep
