#pragma once

// m-scheme shell-model Hamiltonians:
//
//   H = sum_i eps_i a+_i a_i + 1/2 sum_{ijkl} V_ijkl a+_i a+_j a_k a_l
//
// with interaction-file parsing, the orbital -> MPS-site ordering, the
// Jordan-Wigner MPO construction and dense reference forms. Two independent
// routes produce the same operator: build_mpo goes through Jordan-Wigner
// operator strings and MPO compression, dense_hamiltonian applies the
// second-quantized algebra directly to occupation bitstrings.
//
// Fermionic modes are identified with MPS sites in site order; a site i is
// occupied iff bit (n-1-i) of the basis index is set (big-endian, matching
// mps.hpp). V values are used exactly as given (no symmetrization).

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/mps.hpp"

namespace tnprep {

struct Orbital {
  int index = 0;       // 0-based, dense
  int tz2 = 1;         // 2*t_z: +1 proton, -1 neutron
  int n = 0;           // radial quantum number
  int l = 0;           // orbital angular momentum
  int j2 = 1;          // 2*j
  int jz2 = 1;         // 2*j_z
  double energy_mev = 0.0;
};

struct SymmetrySector {
  int n_protons = 0;
  int n_neutrons = 0;
};

struct ShellModelHamiltonian {
  std::vector<Orbital> orbitals;                  // indexed by orbital index
  std::map<std::array<int, 4>, double> two_body;  // (i,j,k,l) -> V_ijkl [MeV]
  int n_orbitals() const { return static_cast<int>(orbitals.size()); }
};

struct QubitMapping {
  std::vector<int> site_of_orbital;
  std::vector<int> orbital_of_site;
  std::vector<int> tz2_of_site;
  int n_sites = 0;

  std::vector<int> proton_sites() const;
  std::vector<int> neutron_sites() const;
};

// ---- interaction files ----
// Line grammar ('#' starts a comment):
//   O <index> <tz2> <n> <l> <j2> <jz2> <energy_MeV>
//   V <i> <j> <k> <l> <value_MeV>
// Orbital indices must form a dense 0-based range. V lines with i == j or
// k == l (repeated creation/annihilation index) are rejected, as are
// references to unknown orbitals, duplicate definitions and unknown keywords.

ShellModelHamiltonian parse_interaction_text(const std::string& text);
ShellModelHamiltonian parse_interaction_file(const std::string& path);

// Proton orbitals occupy the left half of the chain, neutrons the right.
// Within each species orbitals sort by increasing energy; within an energy
// group by decreasing |jz2| with time-reversed (+jz, -jz) partners adjacent,
// positive jz first (ties broken by j2, l, n, original index).
QubitMapping default_ordering(const ShellModelHamiltonian& h);

// Jordan-Wigner MPO: every term becomes a product of local 2x2 operators
// (naive term sum), assembled as a block-diagonal MPO and bond-compressed by
// successive SVDs at relative cutoff 1e-12.
Mpo build_mpo(const ShellModelHamiltonian& h, const QubitMapping& m);

// In-sector occupation bitstrings, ascending. Bit convention as above.
std::vector<std::uint64_t> sector_basis(int n_sites,
                                        const std::vector<int>& tz2_of_site,
                                        const SymmetrySector& sector);

// Dense Hermitian matrix over the full 2^n space (sector == nullptr,
// n_sites <= 16) or the sector-restricted block (dimension <= 65536).
Mat dense_hamiltonian(const ShellModelHamiltonian& h, const QubitMapping& m,
                      const SymmetrySector* sector = nullptr);

// kappa * ((N_p - n_p)^2 + (N_n - n_n)^2) as an MPO (sector-drift penalty).
Mpo number_penalty_mpo(const QubitMapping& m, const SymmetrySector& sector,
                       double kappa);

// Deterministic in-sector start state: a weighted sum of occupation patterns
// that vary both the filled partner-pair group and whether the filling is
// shifted off the pair alignment (seed only draws the weights), compressed to
// bond dimension chi. Exactly in-sector by construction.
Mps random_sector_mps(int n_sites, const SymmetrySector& sector,
                      const QubitMapping& m, int chi, std::uint64_t seed);

}  // namespace tnprep
