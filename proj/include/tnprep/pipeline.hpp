#pragma once

// End-to-end orchestration: solve -> compress -> compile -> decompose ->
// synth -> analysis, file artifacts at every stage, deterministic per seed.

#include <string>
#include <vector>

#include "tnprep/analysis.hpp"
#include "tnprep/circuit.hpp"
#include "tnprep/config.hpp"
#include "tnprep/decompose.hpp"
#include "tnprep/dmrg.hpp"
#include "tnprep/synthesis.hpp"

namespace tnprep {

struct SolveArtifacts {
  std::vector<EigenResult> states;        // lambda = 0..n_states-1
  std::vector<std::string> mps_paths;     // out_dir/state_<lambda>.mps
  std::string energies_path;              // out_dir/energies.csv
  std::string convergence_path;           // out_dir/dmrg_convergence.csv
};

// Parses the Hamiltonian, runs excited_states for cfg.n_states levels and
// writes the MPS/energy/convergence artifacts.
SolveArtifacts run_solve(const PipelineConfig& cfg);

struct PipelineArtifacts {
  SolveArtifacts solve;
  std::vector<ReportRow> rows;            // one per (depth, eps, strategy)
  std::vector<ParetoPoint> pareto;
  std::string report_path;                // out_dir/report.csv
  std::string pareto_path;                // out_dir/pareto.csv
  std::string overlaps_path;              // out_dir/reverse_overlaps.csv
  double extrapolated_overlap_sq = 0.0;   // |<Phi(chi)|exact>|^2 estimate
};

// Full flow on the ground state: compress to cfg.compress_chi, grow circuits
// of 1..max_layers layers, lower each with merging, synthesize at every
// (eps, strategy) pair, bound fidelities through the reverse-sweep
// extrapolation and emit report + Pareto CSVs plus per-circuit
// SU4C1/ROTC1/CTQ1 files. Deterministic byte-for-byte per (config, seed).
PipelineArtifacts run_pipeline(const PipelineConfig& cfg);

// Shared id scheme: circuit_id = "d<layers>_e<eps index>_<rz|hy>".
std::string circuit_id(int layers, int eps_index, SynthesisStrategy s);

}  // namespace tnprep
