#include "tnprep/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace tnprep {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

long parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad integer for ") + what + ": " + s);
  }
  if (pos != s.size())
    throw ParseError(std::string("bad integer for ") + what + ": " + s);
  return v;
}

double parse_real(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad real for ") + what + ": " + s);
  }
  if (pos != s.size() || !std::isfinite(v))
    throw ParseError(std::string("bad real for ") + what + ": " + s);
  return v;
}

}  // namespace

std::vector<int> QubitMapping::proton_sites() const {
  std::vector<int> out;
  for (int i = 0; i < n_sites; ++i)
    if (tz2_of_site[i] > 0) out.push_back(i);
  return out;
}

std::vector<int> QubitMapping::neutron_sites() const {
  std::vector<int> out;
  for (int i = 0; i < n_sites; ++i)
    if (tz2_of_site[i] < 0) out.push_back(i);
  return out;
}

ShellModelHamiltonian parse_interaction_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Orbital> orbitals;
  std::vector<std::pair<std::array<int, 4>, double>> v_entries;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string where = " (line " + std::to_string(line_no) + ")";
    if (toks[0] == "O") {
      if (toks.size() != 8)
        throw ParseError("O line needs 7 fields" + where);
      Orbital o;
      o.index = static_cast<int>(parse_int(toks[1], "index"));
      o.tz2 = static_cast<int>(parse_int(toks[2], "tz2"));
      o.n = static_cast<int>(parse_int(toks[3], "n"));
      o.l = static_cast<int>(parse_int(toks[4], "l"));
      o.j2 = static_cast<int>(parse_int(toks[5], "j2"));
      o.jz2 = static_cast<int>(parse_int(toks[6], "jz2"));
      o.energy_mev = parse_real(toks[7], "energy");
      if (o.tz2 != 1 && o.tz2 != -1)
        throw ParseError("tz2 must be +1 or -1" + where);
      if (o.n < 0 || o.l < 0) throw ParseError("bad n/l" + where);
      if (o.j2 <= 0 || std::abs(o.jz2) > o.j2 || ((o.j2 - o.jz2) % 2) != 0)
        throw ParseError("bad j2/jz2" + where);
      orbitals.push_back(o);
    } else if (toks[0] == "V") {
      if (toks.size() != 6)
        throw ParseError("V line needs 5 fields" + where);
      std::array<int, 4> key{};
      for (int t = 0; t < 4; ++t)
        key[t] = static_cast<int>(parse_int(toks[1 + t], "orbital index"));
      const double val = parse_real(toks[5], "V value");
      if (key[0] == key[1] || key[2] == key[3])
        throw ParseError("V with repeated creation or annihilation index" +
                         where);
      v_entries.emplace_back(key, val);
    } else {
      throw ParseError("unknown keyword '" + toks[0] + "'" + where);
    }
  }
  if (orbitals.empty()) throw ParseError("no orbitals defined");
  ShellModelHamiltonian h;
  h.orbitals.resize(orbitals.size());
  std::vector<bool> seen(orbitals.size(), false);
  for (const auto& o : orbitals) {
    if (o.index < 0 || o.index >= static_cast<int>(orbitals.size()))
      throw ParseError("orbital indices must be dense 0-based (bad index " +
                       std::to_string(o.index) + ")");
    if (seen[o.index])
      throw ParseError("duplicate orbital index " + std::to_string(o.index));
    seen[o.index] = true;
    h.orbitals[o.index] = o;
  }
  for (const auto& [key, val] : v_entries) {
    for (int idx : key)
      if (idx < 0 || idx >= h.n_orbitals())
        throw ParseError("V references unknown orbital " + std::to_string(idx));
    if (h.two_body.count(key))
      throw ParseError("duplicate V entry (" + std::to_string(key[0]) + "," +
                       std::to_string(key[1]) + "," + std::to_string(key[2]) +
                       "," + std::to_string(key[3]) + ")");
    h.two_body[key] = val;
  }
  return h;
}

ShellModelHamiltonian parse_interaction_file(const std::string& path) {
  return parse_interaction_text(read_text_file(path));
}

QubitMapping default_ordering(const ShellModelHamiltonian& h) {
  std::vector<int> order(h.n_orbitals());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int idx) {
    const Orbital& o = h.orbitals[idx];
    // protons (tz2=+1) left; energy ascending; |jz2| descending with +jz
    // first so time-reversed partners sit adjacent.
    return std::make_tuple(-o.tz2, o.energy_mev, -std::abs(o.jz2), o.j2, o.l,
                           o.n, -o.jz2, idx);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key(a) < key(b); });
  QubitMapping m;
  m.n_sites = h.n_orbitals();
  m.orbital_of_site = order;
  m.site_of_orbital.assign(m.n_sites, -1);
  m.tz2_of_site.assign(m.n_sites, 0);
  for (int s = 0; s < m.n_sites; ++s) {
    m.site_of_orbital[order[s]] = s;
    m.tz2_of_site[s] = h.orbitals[order[s]].tz2;
  }
  return m;
}

namespace {

struct Factor {
  int site = 0;
  bool create = false;
};

// Product of Jordan-Wigner strings for the given factor sequence (leftmost
// factor first), as one 2x2 operator per site.
std::vector<Mat2> jw_site_ops(int n_sites, const std::vector<Factor>& factors) {
  Mat2 eye = Mat2::Identity();
  Mat2 z = Mat2::Identity();
  z(1, 1) = -1.0;
  Mat2 lower = Mat2::Zero();  // annihilation |0><1|
  lower(0, 1) = 1.0;
  Mat2 raise = Mat2::Zero();  // creation |1><0|
  raise(1, 0) = 1.0;
  std::vector<Mat2> ops(n_sites, eye);
  for (const auto& f : factors) {
    for (int q = 0; q < f.site; ++q) ops[q] = ops[q] * z;
    ops[f.site] = ops[f.site] * (f.create ? raise : lower);
  }
  return ops;
}

Mpo term_mpo(const std::vector<Mat2>& site_ops, double coeff) {
  Mpo t;
  t.tensors.resize(site_ops.size());
  for (std::size_t i = 0; i < site_ops.size(); ++i) {
    const double c = (i == 0) ? coeff : 1.0;
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si)
        t.tensors[i].w[so][si] = Mat::Constant(1, 1, c * site_ops[i](so, si));
  }
  return t;
}

void accumulate(Mpo* acc, bool* have, const Mpo& t) {
  if (!*have) {
    *acc = t;
    *have = true;
  } else {
    *acc = mpo_sum(*acc, t);
  }
  if (acc->max_bond() > 48) mpo_compress(*acc, 1e-13);
}

}  // namespace

Mpo build_mpo(const ShellModelHamiltonian& h, const QubitMapping& m) {
  const int n = m.n_sites;
  if (n != h.n_orbitals()) throw ValidationError("build_mpo: mapping mismatch");
  Mpo acc;
  bool have = false;
  for (int i = 0; i < h.n_orbitals(); ++i) {
    const double eps = h.orbitals[i].energy_mev;
    if (eps == 0.0) continue;
    const int p = m.site_of_orbital[i];
    accumulate(&acc, &have,
               term_mpo(jw_site_ops(n, {{p, true}, {p, false}}), eps));
  }
  for (const auto& [key, val] : h.two_body) {
    if (val == 0.0) continue;
    const std::vector<Factor> factors = {{m.site_of_orbital[key[0]], true},
                                         {m.site_of_orbital[key[1]], true},
                                         {m.site_of_orbital[key[2]], false},
                                         {m.site_of_orbital[key[3]], false}};
    accumulate(&acc, &have, term_mpo(jw_site_ops(n, factors), 0.5 * val));
  }
  if (!have) acc = term_mpo(std::vector<Mat2>(n, Mat2::Identity()), 0.0);
  mpo_compress(acc, 1e-12);
  return acc;
}

std::vector<std::uint64_t> sector_basis(int n_sites,
                                        const std::vector<int>& tz2_of_site,
                                        const SymmetrySector& sector) {
  if (n_sites <= 0 || n_sites > 24)
    throw ValidationError("sector_basis: n_sites out of range");
  if (static_cast<int>(tz2_of_site.size()) != n_sites)
    throw ValidationError("sector_basis: tz2 list size mismatch");
  std::vector<std::uint64_t> basis;
  const std::uint64_t dim = 1ULL << n_sites;
  for (std::uint64_t x = 0; x < dim; ++x) {
    int np = 0, nn = 0;
    for (int i = 0; i < n_sites; ++i) {
      if ((x >> (n_sites - 1 - i)) & 1ULL)
        (tz2_of_site[i] > 0 ? np : nn) += 1;
    }
    if (np == sector.n_protons && nn == sector.n_neutrons) basis.push_back(x);
  }
  return basis;
}

namespace {

// Applies a_site / a+_site to an occupation bitstring; returns false when the
// operator annihilates it. Sign is (-1)^(occupied sites left of `site`).
bool apply_mode(std::uint64_t* bits, int n_sites, int site, bool create,
                int* sign) {
  const std::uint64_t mask = 1ULL << (n_sites - 1 - site);
  const bool occ = (*bits & mask) != 0;
  if (create == occ) return false;
  int count = 0;
  for (int q = 0; q < site; ++q)
    if ((*bits >> (n_sites - 1 - q)) & 1ULL) ++count;
  if (count & 1) *sign = -*sign;
  *bits ^= mask;
  return true;
}

}  // namespace

Mat dense_hamiltonian(const ShellModelHamiltonian& h, const QubitMapping& m,
                      const SymmetrySector* sector) {
  const int n = m.n_sites;
  if (n != h.n_orbitals())
    throw ValidationError("dense_hamiltonian: mapping mismatch");
  std::vector<std::uint64_t> basis;
  if (sector) {
    basis = sector_basis(n, m.tz2_of_site, *sector);
    if (basis.size() > 65536)
      throw ValidationError("dense_hamiltonian: sector dimension too large");
    if (basis.empty())
      throw ValidationError("dense_hamiltonian: empty sector");
  } else {
    if (n > 16) throw ValidationError("dense_hamiltonian: too many sites");
    basis.resize(1ULL << n);
    std::iota(basis.begin(), basis.end(), 0ULL);
  }
  auto position = [&](std::uint64_t y) -> Eigen::Index {
    const auto it = std::lower_bound(basis.begin(), basis.end(), y);
    if (it == basis.end() || *it != y) return -1;
    return it - basis.begin();
  };
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  Mat ham = Mat::Zero(dim, dim);

  // factor lists in operator order; applied to the ket right-to-left
  struct Term {
    std::vector<std::pair<int, bool>> factors;  // (site, create)
    double coeff;
  };
  std::vector<Term> terms;
  for (int i = 0; i < h.n_orbitals(); ++i) {
    if (h.orbitals[i].energy_mev == 0.0) continue;
    const int p = m.site_of_orbital[i];
    terms.push_back({{{p, true}, {p, false}}, h.orbitals[i].energy_mev});
  }
  for (const auto& [key, val] : h.two_body) {
    if (val == 0.0) continue;
    terms.push_back({{{m.site_of_orbital[key[0]], true},
                      {m.site_of_orbital[key[1]], true},
                      {m.site_of_orbital[key[2]], false},
                      {m.site_of_orbital[key[3]], false}},
                     0.5 * val});
  }

  for (Eigen::Index col = 0; col < dim; ++col) {
    for (const auto& term : terms) {
      std::uint64_t bits = basis[col];
      int sign = 1;
      bool alive = true;
      for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        if (!apply_mode(&bits, n, it->first, it->second, &sign)) {
          alive = false;
          break;
        }
      }
      if (!alive) continue;
      const Eigen::Index row = position(bits);
      if (row < 0) continue;  // projected out of the sector block
      ham(row, col) += sign * term.coeff;
    }
  }
  return ham;
}

Mpo number_penalty_mpo(const QubitMapping& m, const SymmetrySector& sector,
                       double kappa) {
  const int n = m.n_sites;
  if (n <= 0) throw ValidationError("number_penalty_mpo: empty mapping");
  Mat2 eye = Mat2::Identity();
  Mat2 num = Mat2::Zero();
  num(1, 1) = 1.0;
  Mpo acc;
  bool have = false;
  // kappa * (N_s - target_s)^2 per species, expanded in number operators:
  // target^2 * I + sum_i (1 - 2*target) n_i + 2 sum_{i<j} n_i n_j.
  for (int species = 0; species < 2; ++species) {
    const auto sites = species == 0 ? m.proton_sites() : m.neutron_sites();
    const double target =
        species == 0 ? sector.n_protons : sector.n_neutrons;
    if (target > 0.0) {
      std::vector<Mat2> ident(n, eye);
      accumulate(&acc, &have, term_mpo(ident, kappa * target * target));
    }
    for (std::size_t a = 0; a < sites.size(); ++a) {
      std::vector<Mat2> ops(n, eye);
      ops[sites[a]] = num;
      accumulate(&acc, &have, term_mpo(ops, kappa * (1.0 - 2.0 * target)));
      for (std::size_t b = a + 1; b < sites.size(); ++b) {
        std::vector<Mat2> pair_ops(n, eye);
        pair_ops[sites[a]] = num;
        pair_ops[sites[b]] = num;
        accumulate(&acc, &have, term_mpo(pair_ops, 2.0 * kappa));
      }
    }
  }
  if (!have) acc = term_mpo(std::vector<Mat2>(n, eye), 0.0);
  mpo_compress(acc, 1e-12);
  return acc;
}

Mps random_sector_mps(int n_sites, const SymmetrySector& sector,
                      const QubitMapping& m, int chi, std::uint64_t seed) {
  if (n_sites != m.n_sites)
    throw ValidationError("random_sector_mps: mapping mismatch");
  if (chi < 1) throw ValidationError("random_sector_mps: chi must be >= 1");
  const auto protons = m.proton_sites();
  const auto neutrons = m.neutron_sites();
  if (sector.n_protons < 0 ||
      sector.n_protons > static_cast<int>(protons.size()) ||
      sector.n_neutrons < 0 ||
      sector.n_neutrons > static_cast<int>(neutrons.size()))
    throw ValidationError("random_sector_mps: sector does not fit the chain");
  Rng rng(seed);
  const int k = std::max(1, std::min(chi, 6));
  std::vector<std::vector<int>> patterns;  // bits per site
  std::vector<double> weights;
  // Patterns fill sites in partner order (the canonical ordering places
  // time-reversed partners next to each other). Interactions often conserve
  // the pair structure exactly, so any component the start state lacks can
  // never appear later: pattern t therefore varies both the filled pair group
  // (rotation) and whether each species' filling is shifted off the partner
  // alignment ("broken" pairs), covering the paired and pair-broken sectors.
  auto pick = [](const std::vector<int>& sites, int count, int rot, bool brk,
                 std::vector<int>* bits) {
    const int ns = static_cast<int>(sites.size());
    if (ns == 0 || count == 0) return;
    std::vector<int> order(ns);
    for (int i = 0; i < ns; ++i) order[i] = i;
    const int groups = ns / 2;
    if (rot > 0 && groups > 1) {
      const int shift = rot % groups;
      for (int g = 0; g < groups; ++g) {
        const int src = (g + shift) % groups;
        order[2 * g] = 2 * src;
        order[2 * g + 1] = 2 * src + 1;
      }
    }
    if (brk) std::rotate(order.begin(), order.begin() + 1, order.end());
    for (int i = 0; i < count && i < ns; ++i) (*bits)[sites[order[i]]] = 1;
  };
  struct Kind {
    int rot;
    bool brk_p, brk_n;
  };
  static const Kind kinds[6] = {{0, false, false}, {0, false, true},
                                {0, true, false},  {1, false, false},
                                {0, true, true},   {2, false, false}};
  for (int t = 0; t < k; ++t) {
    std::vector<int> bits(n_sites, 0);
    const Kind kd = kinds[t % 6];
    pick(protons, sector.n_protons, kd.rot, kd.brk_p, &bits);
    pick(neutrons, sector.n_neutrons, kd.rot, kd.brk_n, &bits);
    patterns.push_back(std::move(bits));
    weights.push_back(1.0 + rng.uniform());
  }
  // Direct sum of the weighted product states (bond dimension k), then
  // truncation down to chi.
  Mps psi;
  psi.tensors.resize(n_sites);
  for (int i = 0; i < n_sites; ++i) {
    const int cl = (i == 0) ? 1 : k;
    const int cr = (i == n_sites - 1) ? 1 : k;
    auto& t = psi.tensors[i];
    for (int s = 0; s < 2; ++s) t.m[s] = Mat::Zero(cl, cr);
    for (int p = 0; p < k; ++p) {
      const int s = patterns[p][i];
      const int row = (cl == 1) ? 0 : p;
      const int col = (cr == 1) ? 0 : p;
      t.m[s](row, col) += (i == 0) ? weights[p] : 1.0;
    }
  }
  truncate(psi, chi, 1e-12);
  normalize(psi);
  return psi;
}

}  // namespace tnprep
