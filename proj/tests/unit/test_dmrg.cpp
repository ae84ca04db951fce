#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "support/toys.hpp"
#include "tnprep/dmrg.hpp"
#include "tnprep/hamiltonian.hpp"
#include "tnprep/mps.hpp"

using namespace tnprep;
using namespace tnprep::testing;

namespace {

struct Instance {
  ShellModelHamiltonian h;
  QubitMapping m;
  Mpo mpo;
};

Instance pairing_instance() {
  Instance inst;
  inst.h = parse_interaction_text(toy_pairing_12_text());
  inst.m = default_ordering(inst.h);
  inst.mpo = build_mpo(inst.h, inst.m);
  return inst;
}

DmrgConfig sector_config(const Instance& inst, int chi) {
  DmrgConfig cfg;
  cfg.chi_max = chi;
  cfg.proton_sites = inst.m.proton_sites();
  cfg.neutron_sites = inst.m.neutron_sites();
  cfg.number_penalty_kappa = 50.0;
  cfg.seed = 7;
  return cfg;
}

Eigen::VectorXd sector_spectrum(const Instance& inst,
                                const SymmetrySector& sector) {
  const Mat h = dense_hamiltonian(inst.h, inst.m, &sector);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("diagonal hamiltonian: ground state is the cheapest filling") {
  // V = 0, distinct energies; sector (1,1) ground = lowest proton + lowest
  // neutron single-particle energies.
  ShellModelHamiltonian h;
  for (int i = 0; i < 3; ++i)
    h.orbitals.push_back({i, 1, 0, 0, 1, i == 0 ? 1 : -1, 1.0 + 0.5 * i});
  for (int i = 3; i < 6; ++i)
    h.orbitals.push_back({i, -1, 0, 0, 1, i == 3 ? 1 : -1, 2.0 + 0.25 * i});
  const QubitMapping m = default_ordering(h);
  const Mpo mpo = build_mpo(h, m);
  const SymmetrySector sector{1, 1};
  const Mps init = random_sector_mps(6, sector, m, 4, 3);
  DmrgConfig cfg;
  cfg.chi_max = 8;
  cfg.proton_sites = m.proton_sites();
  cfg.neutron_sites = m.neutron_sites();
  const EigenResult res = ground_state(mpo, cfg, init);
  CHECK(res.converged);
  const Eigen::VectorXd exact = sector_spectrum({h, m, mpo}, sector);
  CHECK(res.energy_mev == doctest::Approx(exact(0)).epsilon(1e-9));
}

TEST_CASE("pairing ground state matches the sector-restricted dense oracle") {
  const Instance inst = pairing_instance();
  const SymmetrySector sector{2, 2};
  const Mps init = random_sector_mps(12, sector, inst.m, 4, 11);
  const EigenResult res = ground_state(inst.mpo, sector_config(inst, 32), init);
  CHECK(res.converged);
  const Eigen::VectorXd exact = sector_spectrum(inst, sector);
  CHECK(std::abs(res.energy_mev - exact(0)) <=
        1e-6 * std::abs(exact(0)));
  // variational upper bound and monotone sweep series
  CHECK(res.energy_mev >= exact(0) - 1e-9);
  for (std::size_t j = 0; j + 1 < res.sweeps.size(); ++j)
    CHECK(res.sweeps[j + 1].energy_mev <= res.sweeps[j].energy_mev + 1e-9);
  for (const auto& rec : res.sweeps) CHECK(rec.max_bond <= 32);
  // energy field is the plain expectation of the returned state
  CHECK(res.energy_mev ==
        doctest::Approx(expectation(inst.mpo, res.state)).epsilon(1e-9));
}

TEST_CASE("determinism: same config and seed reproduce the energy") {
  const Instance inst = pairing_instance();
  const SymmetrySector sector{2, 2};
  const Mps init = random_sector_mps(12, sector, inst.m, 4, 11);
  const DmrgConfig cfg = sector_config(inst, 16);
  const EigenResult a = ground_state(inst.mpo, cfg, init);
  const EigenResult b = ground_state(inst.mpo, cfg, init);
  CHECK(std::abs(a.energy_mev - b.energy_mev) < 1e-12);
}

TEST_CASE("excited states match the three lowest dense eigenvalues") {
  const Instance inst = pairing_instance();
  const SymmetrySector sector{2, 2};
  const Mps init = random_sector_mps(12, sector, inst.m, 4, 11);
  const auto states = excited_states(inst.mpo, sector_config(inst, 32), 3, init);
  REQUIRE(states.size() == 3);
  const Eigen::VectorXd exact = sector_spectrum(inst, sector);
  for (int j = 0; j < 3; ++j) {
    CHECK(states[j].lambda == j);
    CHECK(std::abs(states[j].energy_mev - exact(j)) <=
          1e-5 * std::abs(exact(j)));
  }
  CHECK(states[0].energy_mev <= states[1].energy_mev);
  CHECK(states[1].energy_mev <= states[2].energy_mev);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      CHECK(std::abs(overlap(states[a].state, states[b].state)) < 1e-4);
}

TEST_CASE("penalty weight below the gap trips the orthogonality check") {
  // Two-level system per species: w far below the spectral separation makes
  // the lambda=1 run collapse back onto the ground state.
  ShellModelHamiltonian h;
  h.orbitals.push_back({0, 1, 0, 0, 1, 1, 0.0});
  h.orbitals.push_back({1, 1, 0, 0, 1, -1, 50.0});
  h.orbitals.push_back({2, -1, 0, 0, 1, 1, 0.0});
  h.orbitals.push_back({3, -1, 0, 0, 1, -1, 50.0});
  const QubitMapping m = default_ordering(h);
  const Mpo mpo = build_mpo(h, m);
  const Mps init = random_sector_mps(4, {1, 1}, m, 2, 5);
  DmrgConfig cfg;
  cfg.chi_max = 4;
  cfg.penalty_weight_mev = 0.05;  // gap is 50 MeV
  CHECK_THROWS_AS(excited_states(mpo, cfg, 2, init), ConvergenceError);
}

TEST_CASE("reverse sweep series descends in overlap as chi shrinks") {
  const Instance inst = pairing_instance();
  const SymmetrySector sector{2, 2};
  const Mps init = random_sector_mps(12, sector, inst.m, 4, 11);
  const std::vector<int> chis = {32, 16, 8, 4, 2};
  const auto series =
      reverse_sweep_series(inst.mpo, chis, sector_config(inst, 32), init);
  REQUIRE(series.size() == chis.size());
  // energies non-decreasing as chi decreases
  for (std::size_t j = 0; j + 1 < series.size(); ++j)
    CHECK(series[j + 1].energy_mev >= series[j].energy_mev - 1e-9);
  for (std::size_t j = 0; j < series.size(); ++j)
    CHECK(series[j].state.max_bond() <= chis[j]);
  // overlap with the sector-restricted dense ground state is non-increasing
  const SymmetrySector sec{2, 2};
  const Mat hs = dense_hamiltonian(inst.h, inst.m, &sec);
  Eigen::SelfAdjointEigenSolver<Mat> ess(hs);
  const auto basis = sector_basis(12, inst.m.tz2_of_site, sec);
  Vec exact_full = Vec::Zero(1 << 12);
  for (std::size_t b = 0; b < basis.size(); ++b)
    exact_full(static_cast<int>(basis[b])) = ess.eigenvectors()(b, 0);
  double prev = 2.0;
  for (const auto& r : series) {
    const Vec v = mps_to_statevector(r.state);
    const double ov = std::abs((exact_full.adjoint() * v)(0, 0));
    CHECK(ov <= prev + 1e-9);
    prev = ov;
  }
  CHECK(prev > 0.5);  // even chi=2 keeps most of the pairing ground state
}

TEST_CASE("reverse sweep accepts a repeated chi entry idempotently") {
  const Instance inst = pairing_instance();
  const Mps init = random_sector_mps(12, {2, 2}, inst.m, 4, 11);
  const auto series = reverse_sweep_series(inst.mpo, {8, 8},
                                           sector_config(inst, 8), init);
  REQUIRE(series.size() == 2);
  CHECK(series[1].energy_mev <= series[0].energy_mev + 1e-9);
  CHECK_THROWS_AS(
      reverse_sweep_series(inst.mpo, {8, 16}, sector_config(inst, 8), init),
      ValidationError);
  CHECK_THROWS_AS(
      reverse_sweep_series(inst.mpo, {}, sector_config(inst, 8), init),
      ValidationError);
}

TEST_CASE("sweep record csv round trip shape") {
  std::vector<SweepRecord> recs = {{1, -1.25, 8, 1e-9}, {2, -1.5, 16, 2e-9}};
  const std::string csv = sweep_records_csv(recs);
  CHECK(csv.find("sweep,energy_MeV,max_bond,truncation_error_sum\n") == 0);
  CHECK(csv.find("1,-1.25,8,") != std::string::npos);
  CHECK(csv.find("2,-1.5,16,") != std::string::npos);
}
