#pragma once

// Two-site DMRG with a Lanczos effective solver, penalty-method excited
// states and the descending-chi ("reverse sweep") series used for overlap
// extrapolation.
//
// Excited states minimize H_lambda = H + w * sum_{mu<lambda} |psi_mu><psi_mu|
// with the projector handled through cached overlap environments (never as an
// explicit MPO). Sweep energies record the minimized objective (including
// penalties), which is the variationally monotone quantity; EigenResult::
// energy_mev is always the plain <H> of the final state.

#include <cstdint>
#include <vector>

#include "tnprep/common.hpp"
#include "tnprep/mps.hpp"

namespace tnprep {

struct DmrgConfig {
  int chi_max = 64;
  double sv_tol = 1e-8;        // absolute singular-value floor
  int max_sweeps = 30;
  double energy_rtol = 1e-8;   // sweep-to-sweep relative energy change
  double penalty_weight_mev = 20.0;
  int lanczos_dim = 20;
  std::uint64_t seed = 0;

  // Sector bookkeeping (optional). When the proton/neutron site lists are
  // set, per-sweep occupation drift beyond leakage_tol raises
  // ConvergenceError; number_penalty_kappa > 0 additionally adds the explicit
  // kappa*((N_p-n_p)^2 + (N_n-n_n)^2) penalty MPO as a fallback guard.
  std::vector<int> proton_sites;
  std::vector<int> neutron_sites;
  double leakage_tol = 1e-6;
  double number_penalty_kappa = 0.0;
};

struct SweepRecord {
  int sweep = 0;
  double energy_mev = 0.0;  // minimized objective at sweep end
  int max_bond = 0;
  double truncation_error_sum = 0.0;
};

struct EigenResult {
  Mps state;
  double energy_mev = 0.0;  // <H> of the returned state (no penalties)
  std::vector<SweepRecord> sweeps;
  bool converged = false;
  int lambda = 0;
};

// Ground state from `init` (truncated to chi_max first). Never weakens the
// convergence check: converged=false is reported when max_sweeps runs out.
EigenResult ground_state(const Mpo& h, const DmrgConfig& cfg, const Mps& init);

// States lambda = 0..k-1 via the penalty method. Errors if any pairwise
// |overlap| between the returned states exceeds 1e-4 (penalty weight too
// small relative to the spectrum).
std::vector<EigenResult> excited_states(const Mpo& h, const DmrgConfig& cfg,
                                        int k, const Mps& init);

// Ground states along a strictly descending chi ladder; chis[0] starts from
// `init`, each later stage restarts from the previous state truncated down.
std::vector<EigenResult> reverse_sweep_series(const Mpo& h,
                                              const std::vector<int>& chis,
                                              const DmrgConfig& cfg,
                                              const Mps& init);

// Convergence CSV ("sweep,energy_MeV,max_bond,truncation_error_sum").
std::string sweep_records_csv(const std::vector<SweepRecord>& records);

}  // namespace tnprep
