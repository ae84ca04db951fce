// pybind11 surface: the main operations of every pipeline stage.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tnprep/analysis.hpp"
#include "tnprep/circuit.hpp"
#include "tnprep/config.hpp"
#include "tnprep/decompose.hpp"
#include "tnprep/dmrg.hpp"
#include "tnprep/hamiltonian.hpp"
#include "tnprep/mps.hpp"
#include "tnprep/pipeline.hpp"
#include "tnprep/synthesis.hpp"

namespace py = pybind11;
using namespace tnprep;

namespace {

void register_errors(py::module_& m) {
  static py::exception<Error> base(m, "TnprepError");
  py::register_exception<IoError>(m, "TnprepIoError", base);
  py::register_exception<ParseError>(m, "TnprepParseError", base);
  py::register_exception<ConfigError>(m, "TnprepConfigError", base);
  py::register_exception<ValidationError>(m, "TnprepValidationError", base);
  py::register_exception<ConvergenceError>(m, "TnprepConvergenceError", base);
  py::register_exception<FitError>(m, "TnprepFitError", base);
  py::register_exception<SynthesisError>(m, "TnprepSynthesisError", base);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shell-model Hamiltonians to low-T-count Clifford+T circuits";
  register_errors(m);

  // ---- hamiltonian ----
  py::class_<Orbital>(m, "Orbital")
      .def(py::init<>())
      .def_readwrite("index", &Orbital::index)
      .def_readwrite("tz2", &Orbital::tz2)
      .def_readwrite("n", &Orbital::n)
      .def_readwrite("l", &Orbital::l)
      .def_readwrite("j2", &Orbital::j2)
      .def_readwrite("jz2", &Orbital::jz2)
      .def_readwrite("energy_mev", &Orbital::energy_mev);
  py::class_<SymmetrySector>(m, "SymmetrySector")
      .def(py::init<int, int>(), py::arg("n_protons"), py::arg("n_neutrons"))
      .def_readwrite("n_protons", &SymmetrySector::n_protons)
      .def_readwrite("n_neutrons", &SymmetrySector::n_neutrons);
  py::class_<ShellModelHamiltonian>(m, "ShellModelHamiltonian")
      .def(py::init<>())
      .def_readwrite("orbitals", &ShellModelHamiltonian::orbitals)
      .def_property_readonly("n_terms", [](const ShellModelHamiltonian& h) {
        return h.two_body.size();
      });
  py::class_<QubitMapping>(m, "QubitMapping")
      .def_readonly("site_of_orbital", &QubitMapping::site_of_orbital)
      .def_readonly("orbital_of_site", &QubitMapping::orbital_of_site)
      .def_readonly("tz2_of_site", &QubitMapping::tz2_of_site)
      .def_readonly("n_sites", &QubitMapping::n_sites)
      .def("proton_sites", &QubitMapping::proton_sites)
      .def("neutron_sites", &QubitMapping::neutron_sites);
  m.def("parse_interaction_text", &parse_interaction_text);
  m.def("parse_interaction_file", &parse_interaction_file);
  m.def("default_ordering", &default_ordering);
  m.def("sector_basis", &sector_basis, py::arg("n_sites"),
        py::arg("tz2_of_site"), py::arg("sector"));
  m.def(
      "dense_hamiltonian",
      [](const ShellModelHamiltonian& h, const QubitMapping& mp,
         const SymmetrySector* sector) {
        return dense_hamiltonian(h, mp, sector);
      },
      py::arg("h"), py::arg("mapping"), py::arg("sector") = nullptr);

  // ---- mps / mpo ----
  py::class_<Mps>(m, "Mps")
      .def_readonly("center", &Mps::center)
      .def_readwrite("norm", &Mps::norm)
      .def("n_sites", &Mps::n_sites)
      .def("bond_dims", &Mps::bond_dims)
      .def("max_bond", &Mps::max_bond);
  py::class_<Mpo>(m, "Mpo")
      .def("n_sites", [](const Mpo& o) { return o.tensors.size(); });
  m.def("build_mpo", &build_mpo, py::arg("h"), py::arg("mapping"));
  m.def("number_penalty_mpo", &number_penalty_mpo, py::arg("mapping"),
        py::arg("sector"), py::arg("kappa"));
  m.def("random_sector_mps", &random_sector_mps, py::arg("n_sites"),
        py::arg("sector"), py::arg("mapping"), py::arg("chi"),
        py::arg("seed"));
  m.def("product_state", &product_state);
  m.def("overlap", &overlap);
  m.def("expectation", &expectation);
  m.def("site_occupations", &site_occupations);
  m.def("compress", &compress, py::arg("target"), py::arg("chi_max"),
        py::arg("n_sweeps") = 4);
  m.def(
      "truncate",
      [](Mps psi, int chi_max, double sv_tol) {
        const double w = truncate(&psi, chi_max, sv_tol);
        return py::make_tuple(psi, w);
      },
      py::arg("psi"), py::arg("chi_max"), py::arg("sv_tol") = 0.0);
  m.def("mps_to_statevector", &mps_to_statevector);
  m.def("statevector_to_mps", &statevector_to_mps, py::arg("v"),
        py::arg("chi_max") = 0, py::arg("sv_tol") = 0.0);
  m.def("mpo_to_dense", &mpo_to_dense);
  m.def("save_mps", &save_mps);
  m.def("load_mps", &load_mps);

  // ---- dmrg ----
  py::class_<DmrgConfig>(m, "DmrgConfig")
      .def(py::init<>())
      .def_readwrite("chi_max", &DmrgConfig::chi_max)
      .def_readwrite("sv_tol", &DmrgConfig::sv_tol)
      .def_readwrite("max_sweeps", &DmrgConfig::max_sweeps)
      .def_readwrite("energy_rtol", &DmrgConfig::energy_rtol)
      .def_readwrite("penalty_weight_mev", &DmrgConfig::penalty_weight_mev)
      .def_readwrite("lanczos_dim", &DmrgConfig::lanczos_dim)
      .def_readwrite("seed", &DmrgConfig::seed)
      .def_readwrite("proton_sites", &DmrgConfig::proton_sites)
      .def_readwrite("neutron_sites", &DmrgConfig::neutron_sites)
      .def_readwrite("leakage_tol", &DmrgConfig::leakage_tol)
      .def_readwrite("number_penalty_kappa", &DmrgConfig::number_penalty_kappa);
  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("sweep", &SweepRecord::sweep)
      .def_readonly("energy_mev", &SweepRecord::energy_mev)
      .def_readonly("max_bond", &SweepRecord::max_bond)
      .def_readonly("truncation_error_sum", &SweepRecord::truncation_error_sum);
  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("state", &EigenResult::state)
      .def_readonly("energy_mev", &EigenResult::energy_mev)
      .def_readonly("sweeps", &EigenResult::sweeps)
      .def_readonly("converged", &EigenResult::converged)
      .def_readonly("lambda_", &EigenResult::lambda)
      .def("__repr__", [](const EigenResult& r) {
        return "<EigenResult lambda=" + std::to_string(r.lambda) +
               " energy_mev=" + fmt_g17(r.energy_mev) + ">";
      });
  m.def("ground_state", &ground_state, py::arg("h"), py::arg("cfg"),
        py::arg("init"));
  m.def("excited_states", &excited_states, py::arg("h"), py::arg("cfg"),
        py::arg("k"), py::arg("init"));
  m.def("reverse_sweep_series", &reverse_sweep_series, py::arg("h"),
        py::arg("chis"), py::arg("cfg"), py::arg("init"));

  // ---- circuit ----
  py::class_<Su4Gate>(m, "Su4Gate")
      .def_readwrite("layer", &Su4Gate::layer)
      .def_readwrite("i", &Su4Gate::i)
      .def_readwrite("j", &Su4Gate::j)
      .def_readwrite("u", &Su4Gate::u);
  py::class_<StaircaseCircuit>(m, "StaircaseCircuit")
      .def(py::init<>())
      .def_readwrite("n_qubits", &StaircaseCircuit::n_qubits)
      .def_readwrite("center_bond", &StaircaseCircuit::center_bond)
      .def_readwrite("layers", &StaircaseCircuit::layers)
      .def("n_gates", &StaircaseCircuit::n_gates);
  py::class_<CompileReport>(m, "CompileReport")
      .def_readonly("overlaps_per_layer", &CompileReport::overlaps_per_layer)
      .def_readonly("sweeps_per_stage", &CompileReport::sweeps_per_stage)
      .def_readonly("final_overlap", &CompileReport::final_overlap);
  m.def("vshape_layer_order", &vshape_layer_order, py::arg("n_qubits"),
        py::arg("center_bond"));
  m.def("circuit_to_state", &circuit_to_state, py::arg("c"),
        py::arg("chi_max") = 0, py::arg("sv_tol") = 0.0);
  m.def(
      "grow_and_compile",
      [](const Mps& target, int max_layers, double rel_tol, int chi_env,
         int center_bond, std::uint64_t seed) {
        CompileReport rep;
        StaircaseCircuit c = grow_and_compile(target, max_layers, rel_tol,
                                              chi_env, &rep, center_bond, seed);
        return py::make_tuple(c, rep);
      },
      py::arg("target"), py::arg("max_layers"), py::arg("rel_tol") = 1e-4,
      py::arg("chi_env") = 0, py::arg("center_bond") = -1, py::arg("seed") = 0);
  m.def("save_circuit", &save_circuit);
  m.def("load_circuit", &load_circuit);

  // ---- decompose ----
  py::class_<KakDecomposition>(m, "KakDecomposition")
      .def_readonly("pre_a", &KakDecomposition::pre_a)
      .def_readonly("pre_b", &KakDecomposition::pre_b)
      .def_readonly("post_a", &KakDecomposition::post_a)
      .def_readonly("post_b", &KakDecomposition::post_b)
      .def_readonly("x", &KakDecomposition::x)
      .def_readonly("y", &KakDecomposition::y)
      .def_readonly("z", &KakDecomposition::z)
      .def_readonly("phase", &KakDecomposition::phase);
  m.def("kak_decompose", &kak_decompose);
  m.def("canonical_gate", &canonical_gate);
  m.def("zyz_angles", &zyz_angles);
  py::enum_<RotOpKind>(m, "RotOpKind")
      .value("RZ", RotOpKind::kRz)
      .value("H", RotOpKind::kH)
      .value("S", RotOpKind::kS)
      .value("SDG", RotOpKind::kSdg)
      .value("Z", RotOpKind::kZ)
      .value("X", RotOpKind::kX)
      .value("CX", RotOpKind::kCx)
      .value("CZ", RotOpKind::kCz);
  py::class_<RotOp>(m, "RotOp")
      .def_readwrite("kind", &RotOp::kind)
      .def_readwrite("wires", &RotOp::wires)
      .def_readwrite("theta", &RotOp::theta);
  py::class_<RotationCircuit>(m, "RotationCircuit")
      .def_readwrite("n_qubits", &RotationCircuit::n_qubits)
      .def_readwrite("ops", &RotationCircuit::ops)
      .def_readwrite("phase", &RotationCircuit::phase)
      .def("n_rz", &RotationCircuit::n_rz);
  m.def("lower_circuit", &lower_circuit, py::arg("c"), py::arg("merge") = true,
        py::arg("elide_tol") = 1e-10);
  m.def("rotation_circuit_unitary", &rotation_circuit_unitary);
  m.def("save_rotation_circuit", &save_rotation_circuit);
  m.def("load_rotation_circuit", &load_rotation_circuit);

  // ---- synthesis ----
  py::enum_<CtGateKind>(m, "CtGateKind")
      .value("H", CtGateKind::kH)
      .value("S", CtGateKind::kS)
      .value("SDG", CtGateKind::kSdg)
      .value("T", CtGateKind::kT)
      .value("TDG", CtGateKind::kTdg)
      .value("X", CtGateKind::kX)
      .value("Z", CtGateKind::kZ)
      .value("CX", CtGateKind::kCx);
  py::class_<CliffordTSequence>(m, "CliffordTSequence")
      .def_readonly("gates", &CliffordTSequence::gates)
      .def_readonly("t_count", &CliffordTSequence::t_count)
      .def_readonly("achieved_error", &CliffordTSequence::achieved_error)
      .def_readonly("global_phase", &CliffordTSequence::global_phase);
  py::class_<SynthesisDatabase>(m, "SynthesisDatabase")
      .def_readonly("t_budget", &SynthesisDatabase::t_budget)
      .def("n_entries", &SynthesisDatabase::n_entries);
  py::enum_<SynthesisStrategy>(m, "SynthesisStrategy")
      .value("RZ_ONLY", SynthesisStrategy::kRzOnly)
      .value("HYBRID", SynthesisStrategy::kHybrid);
  py::class_<CtOp>(m, "CtOp")
      .def_readonly("kind", &CtOp::kind)
      .def_readonly("a", &CtOp::a)
      .def_readonly("b", &CtOp::b);
  py::class_<CliffordTCircuit>(m, "CliffordTCircuit")
      .def_readonly("n_qubits", &CliffordTCircuit::n_qubits)
      .def_readonly("ops", &CliffordTCircuit::ops)
      .def_readonly("phase", &CliffordTCircuit::phase)
      .def("t_count", &CliffordTCircuit::t_count);
  py::class_<SynthesizedCircuit>(m, "SynthesizedCircuit")
      .def_readonly("circuit", &SynthesizedCircuit::circuit)
      .def_readonly("total_t_count", &SynthesizedCircuit::total_t_count)
      .def_readonly("per_gate_errors", &SynthesizedCircuit::per_gate_errors);
  m.def("build_database", &build_database, py::arg("t_budget"));
  m.def("load_or_build_database", &load_or_build_database, py::arg("t_budget"),
        py::arg("cache_path") = std::string());
  m.def("synth_rz", &synth_rz, py::arg("theta"), py::arg("eps"), py::arg("db"));
  m.def("synth_u3", &synth_u3, py::arg("u"), py::arg("eps"), py::arg("db"));
  m.def("synth_circuit", &synth_circuit, py::arg("r"), py::arg("eps"),
        py::arg("strategy"), py::arg("db"));
  m.def("clifford_t_unitary", &clifford_t_unitary);
  m.def("save_ct_circuit", &save_ct_circuit);
  m.def("load_ct_circuit", &load_ct_circuit);

  // ---- analysis ----
  m.def("wootters_bound", &wootters_bound, py::arg("ab"), py::arg("bc"));
  py::class_<OverlapRecord>(m, "OverlapRecord")
      .def(py::init<>())
      .def_readwrite("chi_small", &OverlapRecord::chi_small)
      .def_readwrite("chi_large", &OverlapRecord::chi_large)
      .def_readwrite("overlap_sq", &OverlapRecord::overlap_sq);
  py::class_<OverlapDataset>(m, "OverlapDataset")
      .def(py::init<>())
      .def_readwrite("records", &OverlapDataset::records);
  py::class_<StageOneFit>(m, "StageOneFit")
      .def_readonly("chi_small", &StageOneFit::chi_small)
      .def_readonly("c", &StageOneFit::c)
      .def_readonly("slope", &StageOneFit::slope)
      .def_readonly("intercept", &StageOneFit::intercept)
      .def_readonly("sse", &StageOneFit::sse);
  py::class_<FitDiagnostics>(m, "FitDiagnostics")
      .def_readonly("stage1", &FitDiagnostics::stage1)
      .def_readonly("stage2_slope", &FitDiagnostics::stage2_slope)
      .def_readonly("stage2_intercept", &FitDiagnostics::stage2_intercept)
      .def_readonly("stage2_sse", &FitDiagnostics::stage2_sse);
  m.def(
      "extrapolate_overlap",
      [](const OverlapDataset& d, const std::vector<int>& small_set,
         const std::vector<int>& large_set, int chi_query) {
        FitDiagnostics diag;
        const double est =
            extrapolate_overlap(d, small_set, large_set, chi_query, &diag);
        return py::make_tuple(est, diag);
      },
      py::arg("data"), py::arg("chi_small_set"), py::arg("chi_large_set"),
      py::arg("chi_query"));
  py::class_<ParetoPoint>(m, "ParetoPoint")
      .def(py::init<>())
      .def_readwrite("t_count", &ParetoPoint::t_count)
      .def_readwrite("infidelity", &ParetoPoint::infidelity)
      .def_readwrite("circuit_id", &ParetoPoint::circuit_id)
      .def_readwrite("eps", &ParetoPoint::eps)
      .def_readwrite("layers", &ParetoPoint::layers);
  m.def("pareto_front", &pareto_front);

  // ---- config / pipeline ----
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("hamiltonian_file", &PipelineConfig::hamiltonian_file)
      .def_readwrite("out_dir", &PipelineConfig::out_dir)
      .def_readwrite("db_cache", &PipelineConfig::db_cache)
      .def_readwrite("dmrg", &PipelineConfig::dmrg)
      .def_readwrite("n_states", &PipelineConfig::n_states)
      .def_readwrite("sector", &PipelineConfig::sector)
      .def_readwrite("has_sector", &PipelineConfig::has_sector)
      .def_readwrite("compress_chi", &PipelineConfig::compress_chi)
      .def_readwrite("reverse_chis", &PipelineConfig::reverse_chis)
      .def_readwrite("max_layers", &PipelineConfig::max_layers)
      .def_readwrite("rel_tol", &PipelineConfig::rel_tol)
      .def_readwrite("chi_env", &PipelineConfig::chi_env)
      .def_readwrite("eps_list", &PipelineConfig::eps_list)
      .def_readwrite("strategy", &PipelineConfig::strategy)
      .def_readwrite("t_budget", &PipelineConfig::t_budget)
      .def_readwrite("seed", &PipelineConfig::seed);
  m.def("load_config", &load_config);
  m.def("parse_config_text", &parse_config_text);
  py::class_<SolveArtifacts>(m, "SolveArtifacts")
      .def_readonly("states", &SolveArtifacts::states)
      .def_readonly("mps_paths", &SolveArtifacts::mps_paths)
      .def_readonly("energies_path", &SolveArtifacts::energies_path)
      .def_readonly("convergence_path", &SolveArtifacts::convergence_path);
  py::class_<ReportRow>(m, "ReportRow")
      .def_readonly("circuit_id", &ReportRow::circuit_id)
      .def_readonly("layers", &ReportRow::layers)
      .def_readonly("eps", &ReportRow::eps)
      .def_readonly("strategy", &ReportRow::strategy)
      .def_readonly("rz_total", &ReportRow::rz_total)
      .def_readonly("t_count", &ReportRow::t_count)
      .def_readonly("overlap_to_target", &ReportRow::overlap_to_target)
      .def_readonly("bound_to_exact", &ReportRow::bound_to_exact);
  py::class_<PipelineArtifacts>(m, "PipelineArtifacts")
      .def_readonly("solve", &PipelineArtifacts::solve)
      .def_readonly("rows", &PipelineArtifacts::rows)
      .def_readonly("pareto", &PipelineArtifacts::pareto)
      .def_readonly("report_path", &PipelineArtifacts::report_path)
      .def_readonly("pareto_path", &PipelineArtifacts::pareto_path)
      .def_readonly("extrapolated_overlap_sq",
                    &PipelineArtifacts::extrapolated_overlap_sq);
  m.def("run_solve", &run_solve);
  m.def("run_pipeline", &run_pipeline);

  m.attr("__all__") = py::make_tuple(
      "Orbital", "SymmetrySector", "ShellModelHamiltonian", "QubitMapping",
      "parse_interaction_text", "parse_interaction_file", "default_ordering",
      "sector_basis", "dense_hamiltonian", "Mps", "Mpo", "build_mpo",
      "number_penalty_mpo", "random_sector_mps", "product_state", "overlap",
      "expectation", "site_occupations", "compress", "truncate",
      "mps_to_statevector", "statevector_to_mps", "mpo_to_dense", "save_mps",
      "load_mps", "DmrgConfig", "SweepRecord", "EigenResult", "ground_state",
      "excited_states", "reverse_sweep_series", "Su4Gate", "StaircaseCircuit",
      "CompileReport", "vshape_layer_order", "circuit_to_state",
      "grow_and_compile", "save_circuit", "load_circuit", "KakDecomposition",
      "kak_decompose", "canonical_gate", "zyz_angles", "RotOpKind", "RotOp",
      "RotationCircuit", "lower_circuit", "rotation_circuit_unitary",
      "save_rotation_circuit", "load_rotation_circuit", "CtGateKind",
      "CliffordTSequence", "SynthesisDatabase", "SynthesisStrategy", "CtOp",
      "CliffordTCircuit", "SynthesizedCircuit", "build_database",
      "load_or_build_database", "synth_rz", "synth_u3", "synth_circuit",
      "clifford_t_unitary", "save_ct_circuit", "load_ct_circuit",
      "wootters_bound", "OverlapRecord", "OverlapDataset", "StageOneFit",
      "FitDiagnostics", "extrapolate_overlap", "ParetoPoint", "pareto_front",
      "PipelineConfig", "load_config", "parse_config_text", "SolveArtifacts",
      "ReportRow", "PipelineArtifacts", "run_solve", "run_pipeline");
}
