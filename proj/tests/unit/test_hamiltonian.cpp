#include <doctest.h>

#include "support/oracles.hpp"
#include "support/toys.hpp"
#include "tnprep/hamiltonian.hpp"

using namespace tnprep;
using namespace tnprep::testing;

TEST_CASE("interaction parser accepts the toy and rejects malformed input") {
  const auto h = parse_interaction_text(toy_pairing_12_text());
  CHECK(h.n_orbitals() == 12);
  CHECK(h.two_body.size() == 24);  // 9 + 9 pairing keys + 6 pn couplings

  CHECK_THROWS_AS(parse_interaction_text(""), ParseError);
  CHECK_THROWS_AS(parse_interaction_text("Q 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_interaction_text("O 0 1 0 0 1 1 1.0\n"
                                         "O 0 1 0 0 1 -1 1.0\n"),
                  ParseError);  // duplicate index
  CHECK_THROWS_AS(parse_interaction_text("O 1 1 0 0 1 1 1.0\n"),
                  ParseError);  // not dense
  CHECK_THROWS_AS(parse_interaction_text("O 0 2 0 0 1 1 1.0\n"),
                  ParseError);  // bad tz2
  CHECK_THROWS_AS(parse_interaction_text("O 0 1 0 0 1 3 1.0\n"),
                  ParseError);  // |jz2| > j2
  CHECK_THROWS_AS(parse_interaction_text("O 0 1 0 0 1 1 1.0\n"
                                         "O 1 1 0 0 1 -1 1.0\n"
                                         "V 0 0 1 0 1.0\n"),
                  ParseError);  // i == j
  CHECK_THROWS_AS(parse_interaction_text("O 0 1 0 0 1 1 1.0\n"
                                         "O 1 1 0 0 1 -1 1.0\n"
                                         "V 0 1 1 2 1.0\n"),
                  ParseError);  // unknown orbital
  CHECK_THROWS_AS(parse_interaction_text("O 0 1 0 0 1 1 1.0\n"
                                         "O 1 1 0 0 1 -1 1.0\n"
                                         "V 0 1 1 0 1.0\n"
                                         "V 0 1 1 0 2.0\n"),
                  ParseError);  // duplicate V

  // comments and blank lines are fine
  const auto h2 = parse_interaction_text(
      "# header\nO 0 1 0 0 1 1 1.0 # inline\n\nO 1 -1 0 0 1 1 2.0\n");
  CHECK(h2.n_orbitals() == 2);
}

TEST_CASE("default ordering puts protons left with partners adjacent") {
  const auto h = parse_interaction_text(toy_pairing_12_text());
  const auto m = default_ordering(h);
  REQUIRE(m.n_sites == 12);
  for (int s = 0; s < 6; ++s) CHECK(m.tz2_of_site[s] == 1);
  for (int s = 6; s < 12; ++s) CHECK(m.tz2_of_site[s] == -1);
  for (int p = 0; p < 6; ++p) {
    const auto& a = h.orbitals[m.orbital_of_site[2 * p]];
    const auto& b = h.orbitals[m.orbital_of_site[2 * p + 1]];
    CHECK(a.jz2 == -b.jz2);  // time-reversed partners adjacent
    CHECK(a.jz2 > 0);        // positive member first
    CHECK(a.j2 == b.j2);
  }
  // |jz2| descending within each species
  for (int s = 0; s + 2 < 6; s += 2) {
    const int cur = std::abs(h.orbitals[m.orbital_of_site[s]].jz2);
    const int nxt = std::abs(h.orbitals[m.orbital_of_site[s + 2]].jz2);
    CHECK(cur >= nxt);
  }
}

TEST_CASE("MPO route equals the independent dense route") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const int n = 4 + static_cast<int>(seed % 4);  // 4..7 orbitals
    const auto h = parse_interaction_text(toy_random_text(n, seed));
    const auto m = default_ordering(h);
    const Mpo mpo = build_mpo(h, m);
    const Mat a = mpo_to_dense(mpo);
    const Mat b = dense_hamiltonian(h, m, nullptr);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-10);  // Hermitian toys
  }
}

TEST_CASE("sector basis has binomial counts and right occupations") {
  const auto h = parse_interaction_text(toy_random_text(6, 9));
  const auto m = default_ordering(h);
  const SymmetrySector sec{2, 1};
  const auto protons = m.proton_sites();
  const auto basis = sector_basis(m.n_sites, m.tz2_of_site, sec);
  const auto choose = [](int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return static_cast<std::size_t>(c + 0.5);
  };
  const std::size_t np = protons.size(), nn = m.n_sites - np;
  CHECK(basis.size() == choose(np, 2) * choose(nn, 1));
  for (auto x : basis) {
    int p = 0, nq = 0;
    for (int i = 0; i < m.n_sites; ++i)
      if ((x >> (m.n_sites - 1 - i)) & 1) (m.tz2_of_site[i] > 0 ? p : nq) += 1;
    CHECK(p == 2);
    CHECK(nq == 1);
  }
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i] > basis[i - 1]);
}

TEST_CASE("sector-restricted dense block matches the full-space restriction") {
  const auto h = parse_interaction_text(toy_random_text(7, 13));
  const auto m = default_ordering(h);
  const SymmetrySector sec{1, 2};
  const Mat full = dense_hamiltonian(h, m, nullptr);
  const Mat block = dense_hamiltonian(h, m, &sec);
  const auto basis = sector_basis(m.n_sites, m.tz2_of_site, sec);
  REQUIRE(static_cast<std::size_t>(block.rows()) == basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c)
      CHECK(std::abs(block(r, c) - full(basis[r], basis[c])) < 1e-12);
}

TEST_CASE("number penalty MPO is the diagonal sector-distance operator") {
  const auto h = parse_interaction_text(toy_random_text(5, 21));
  const auto m = default_ordering(h);
  const SymmetrySector sec{1, 1};
  const double kappa = 3.0;
  const Mat dense = mpo_to_dense(number_penalty_mpo(m, sec, kappa));
  const Eigen::Index dim = Eigen::Index{1} << m.n_sites;
  for (Eigen::Index x = 0; x < dim; ++x) {
    int np = 0, nn = 0;
    for (int i = 0; i < m.n_sites; ++i)
      if ((x >> (m.n_sites - 1 - i)) & 1) (m.tz2_of_site[i] > 0 ? np : nn) += 1;
    const double want = kappa * ((np - 1.0) * (np - 1.0) +
                                 (nn - 1.0) * (nn - 1.0));
    CHECK(std::abs(dense(x, x) - want) < 1e-10);
  }
  Mat off = dense;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random sector MPS is exactly in-sector and deterministic") {
  const auto h = parse_interaction_text(toy_pairing_12_text());
  const auto m = default_ordering(h);
  const SymmetrySector sec{2, 2};
  const Mps psi = random_sector_mps(m.n_sites, sec, m, 8, 77);
  CHECK(psi.max_bond() <= 8);
  CHECK(std::abs(overlap(psi, psi) - cplx(1.0)) < 1e-12);
  const auto occ = site_occupations(psi);
  double p = 0.0, nn = 0.0;
  for (int i = 0; i < m.n_sites; ++i)
    (m.tz2_of_site[i] > 0 ? p : nn) += occ[i];
  CHECK(p == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(nn == doctest::Approx(2.0).epsilon(1e-10));
  // every amplitude outside the sector is exactly zero
  const Vec v = mps_statevector_oracle(psi);
  const auto basis = sector_basis(m.n_sites, m.tz2_of_site, sec);
  double out_of_sector = 0.0, in_sector = 0.0;
  std::size_t bi = 0;
  for (Eigen::Index x = 0; x < v.size(); ++x) {
    const bool in = bi < basis.size() &&
                    basis[bi] == static_cast<std::uint64_t>(x);
    (in ? in_sector : out_of_sector) += std::norm(v(x));
    if (in) ++bi;
  }
  CHECK(out_of_sector < 1e-24);
  CHECK(in_sector == doctest::Approx(1.0).epsilon(1e-12));

  const Mps psi2 = random_sector_mps(m.n_sites, sec, m, 8, 77);
  CHECK(std::abs(overlap(psi, psi2) - cplx(1.0)) < 1e-12);
  const Mps psi3 = random_sector_mps(m.n_sites, sec, m, 8, 78);
  CHECK(std::abs(std::abs(overlap(psi, psi3)) - 1.0) > 1e-6);
}

TEST_CASE("toy pairing Hamiltonian is Hermitian with the expected spectrum "
          "structure") {
  const auto h = parse_interaction_text(toy_pairing_12_text());
  const auto m = default_ordering(h);
  const SymmetrySector sec{2, 2};
  const Mat block = dense_hamiltonian(h, m, &sec);
  REQUIRE(block.rows() == 225);
  CHECK((block - block.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(block);
  // pairing gap: ground state well separated from the first excited state
  CHECK(es.eigenvalues()(0) < es.eigenvalues()(1) - 0.5);
}
