#pragma once

// Flat key-value config ("section.key = value", '#' comments) driving the
// CLI stages. Unknown keys are rejected; values are validated on parse.

#include <cstdint>
#include <string>
#include <vector>

#include "tnprep/dmrg.hpp"
#include "tnprep/hamiltonian.hpp"
#include "tnprep/synthesis.hpp"

namespace tnprep {

struct PipelineConfig {
  // paths.*
  std::string hamiltonian_file;
  std::string out_dir = "out";
  std::string db_cache;  // empty = rebuild in memory

  // dmrg.* (chi_max, sv_tol, max_sweeps, energy_rtol, penalty_weight_mev,
  // lanczos_dim, number_penalty_kappa map straight onto DmrgConfig)
  DmrgConfig dmrg;
  int n_states = 3;  // dmrg.n_states

  // sector.*
  SymmetrySector sector{0, 0};
  bool has_sector = false;

  // compress.*: compilation target bond dimension and the descending ladder
  // used for the reverse-sweep overlap dataset.
  int compress_chi = 8;
  std::vector<int> reverse_chis = {32, 16, 8, 4, 2};

  // compile.*
  int max_layers = 3;
  double rel_tol = 1e-4;
  int chi_env = 0;  // 0 = auto

  // synth.*
  std::vector<double> eps_list = {1e-1, 3.1622776601683794e-2,
                                  1e-2, 3.1622776601683794e-3};
  SynthesisStrategy strategy = SynthesisStrategy::kHybrid;
  int t_budget = 14;

  std::uint64_t seed = 1;
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::string& path);
std::string serialize_config(const PipelineConfig& c);

}  // namespace tnprep
