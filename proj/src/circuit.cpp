#include "tnprep/circuit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace tnprep {

namespace {

constexpr double kEnvTol = 1e-12;  // sv_tol for environment-MPS truncations

Mps zero_state(int n) { return product_state(std::vector<int>(n, 0)); }

// Polar update: the overlap is Tr(E^T g), so with E^T = W S V^dagger the
// unitary maximizing |Tr| is g = V W^dagger (makes the trace real = sum S).
// An all-zero environment carries no gradient; fall back to the identity.
Mat4 polar_gate(const Mat4& env) {
  Eigen::JacobiSVD<Mat4> svd(env.transpose(),
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues()(0) > 0.0)) return Mat4::Identity();
  return svd.matrixV() * svd.matrixU().adjoint();
}

// Environment of a gate on sites (i, i+1) in <top| g |bot>: the contraction
// with the gate removed, E(a, b) = <top| |a><b| |bot> over the pair indices
// a = 2 s_i + s_{i+1} (bra side), b likewise (ket side).
Mat4 gate_env(const Mps& top, const Mps& bot, int i) {
  const int n = top.n_sites();
  Mat l = Mat::Ones(1, 1);
  for (int s = 0; s < i; ++s) {
    Mat nl = Mat::Zero(top.tensors[s].chi_r(), bot.tensors[s].chi_r());
    for (int p = 0; p < 2; ++p)
      nl += top.tensors[s].m[p].adjoint() * l * bot.tensors[s].m[p];
    l = std::move(nl);
  }
  Mat r = Mat::Ones(1, 1);
  for (int s = n - 1; s > i + 1; --s) {
    Mat nr = Mat::Zero(top.tensors[s].chi_l(), bot.tensors[s].chi_l());
    for (int p = 0; p < 2; ++p)
      nr += top.tensors[s].m[p].conjugate() * r *
            bot.tensors[s].m[p].transpose();
    r = std::move(nr);
  }
  const cplx pref = std::conj(cplx(top.norm)) * bot.norm;
  Mat4 env;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      const Mat at = top.tensors[i].m[a1] * top.tensors[i + 1].m[a2];
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          const Mat ab = bot.tensors[i].m[b1] * bot.tensors[i + 1].m[b2];
          env(2 * a1 + a2, 2 * b1 + b2) =
              pref *
              (at.conjugate().cwiseProduct(l * ab * r.transpose())).sum();
        }
    }
  return env;
}

std::vector<Su4Gate*> flat_gates(StaircaseCircuit& c) {
  std::vector<Su4Gate*> gates;
  for (auto& layer : c.layers)
    for (auto& g : layer) gates.push_back(&g);
  return gates;
}

void validate_circuit(const StaircaseCircuit& c) {
  if (c.n_qubits < 2)
    throw ValidationError("circuit: need at least 2 qubits");
  if (c.center_bond < 0 || c.center_bond >= c.n_qubits - 1)
    throw ValidationError("circuit: center_bond out of range");
  for (const auto& layer : c.layers)
    for (const auto& g : layer) {
      if (g.j != g.i + 1 || g.i < 0 || g.j >= c.n_qubits)
        throw ValidationError("circuit: gate must act on an adjacent pair");
      if ((g.u.adjoint() * g.u - Mat4::Identity()).cwiseAbs().maxCoeff() >
          1e-10)
        throw ValidationError("circuit: gate is not unitary");
    }
}

// One polar-update pass over the flattened gates [lo, hi): forward then
// backward, reusing the cached top environments (target pulled down through
// the gates above) and bottom states (|0...0> pushed up through the gates
// below). Returns |<target|U|0>| after the pass.
double sweep_once(StaircaseCircuit& c, const Mps& target, int chi_env, int lo,
                  int hi) {
  auto gates = flat_gates(c);
  const int ng = static_cast<int>(gates.size());
  if (ng == 0) return std::abs(overlap(target, zero_state(c.n_qubits)));
  // tops[k] = (gates above k)^dagger |target>
  std::vector<Mps> tops(ng);
  tops[ng - 1] = target;
  for (int k = ng - 1; k > 0; --k) {
    tops[k - 1] = tops[k];
    apply_gate(tops[k - 1], Mat4(gates[k]->u.adjoint()), gates[k]->i, chi_env,
               kEnvTol);
  }
  // forward pass, keeping the bottom states for the backward pass
  std::vector<Mps> bots(ng);
  bots[0] = zero_state(c.n_qubits);
  for (int k = 0; k < ng; ++k) {
    if (k >= lo && k < hi)
      gates[k]->u = polar_gate(gate_env(tops[k], bots[k], gates[k]->i));
    if (k + 1 < ng) {
      bots[k + 1] = bots[k];
      apply_gate(bots[k + 1], gates[k]->u, gates[k]->i, chi_env, kEnvTol);
    }
  }
  // backward pass; the top is rebuilt from the freshly updated gates
  Mps top = target;
  for (int k = ng - 1; k >= 0; --k) {
    if (k >= lo && k < hi)
      gates[k]->u = polar_gate(gate_env(top, bots[k], gates[k]->i));
    apply_gate(top, Mat4(gates[k]->u.adjoint()), gates[k]->i, chi_env,
               kEnvTol);
  }
  return std::abs(overlap(top, bots[0]));
}

// Sweeps [lo, hi) until the relative overlap gain between consecutive sweeps
// drops below rel_tol; returns the last overlap and counts sweeps.
double sweep_to_convergence(StaircaseCircuit& c, const Mps& target,
                            int chi_env, int lo, int hi, double rel_tol,
                            int* sweeps) {
  double prev = -1.0;
  for (int s = 0; s < 200; ++s) {
    const double ov = sweep_once(c, target, chi_env, lo, hi);
    ++*sweeps;
    if (prev >= 0.0 &&
        std::abs(ov - prev) < rel_tol * std::max(ov, 1e-300))
      return ov;
    prev = ov;
  }
  return prev;
}

}  // namespace

std::vector<std::pair<int, int>> vshape_layer_order(int n_qubits,
                                                    int center_bond) {
  if (n_qubits < 2)
    throw ValidationError("vshape_layer_order: need at least 2 qubits");
  if (center_bond < 0 || center_bond >= n_qubits - 1)
    throw ValidationError("vshape_layer_order: center_bond out of range");
  std::vector<std::pair<int, int>> order;
  order.reserve(n_qubits - 1);
  for (int i = center_bond; i >= 0; --i) order.emplace_back(i, i + 1);
  for (int i = center_bond + 1; i < n_qubits - 1; ++i)
    order.emplace_back(i, i + 1);
  return order;
}

Mps circuit_to_state(const StaircaseCircuit& c, int chi_max, double sv_tol) {
  validate_circuit(c);
  Mps psi = zero_state(c.n_qubits);
  for (const auto& layer : c.layers)
    for (const auto& g : layer) apply_gate(psi, g.u, g.i, chi_max, sv_tol);
  return psi;
}

double optimize_sweep(StaircaseCircuit& c, const Mps& target, int chi_env) {
  validate_circuit(c);
  if (target.n_sites() != c.n_qubits)
    throw ValidationError("optimize_sweep: target size mismatch");
  if (chi_env < 0)
    throw ValidationError("optimize_sweep: chi_env must be >= 0");
  return sweep_once(c, target, chi_env, 0, c.n_gates());
}

StaircaseCircuit grow_and_compile(const Mps& target, int max_layers,
                                  double rel_tol, int chi_env,
                                  CompileReport* report, int center_bond,
                                  std::uint64_t seed) {
  if (max_layers < 1)
    throw ValidationError("grow_and_compile: max_layers must be >= 1");
  if (!(rel_tol > 0.0))
    throw ValidationError("grow_and_compile: rel_tol must be > 0");
  if (target.n_sites() < 2)
    throw ValidationError("grow_and_compile: need at least 2 sites");
  Mps t = target;
  normalize(t);
  const int n = t.n_sites();
  if (chi_env == 0) chi_env = 2 * std::max(1, t.max_bond());
  if (center_bond == -1) {
    const auto dims = t.bond_dims();
    center_bond = static_cast<int>(
        std::max_element(dims.begin(), dims.end()) - dims.begin());
  }
  const auto order = vshape_layer_order(n, center_bond);
  Rng rng(seed);
  StaircaseCircuit c;
  c.n_qubits = n;
  c.center_bond = center_bond;
  CompileReport rep;
  for (int stage = 1; stage <= max_layers; ++stage) {
    // New layers sit next to |0...0>, so they optimize against the residual
    // the existing layers do not capture. Identity start plus a tiny random
    // perturbation (re-unitarized) to avoid exact zero-gradient saddles.
    std::vector<Su4Gate> fresh;
    fresh.reserve(order.size());
    for (const auto& [i, j] : order) {
      Mat4 m = Mat4::Identity();
      for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col)
          m(r, col) += 1e-8 * cplx(rng.normal(), rng.normal());
      Eigen::JacobiSVD<Mat4> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Su4Gate g;
      g.i = i;
      g.j = j;
      g.u = svd.matrixU() * svd.matrixV().adjoint();
      fresh.push_back(std::move(g));
    }
    c.layers.insert(c.layers.begin(), std::move(fresh));
    for (std::size_t li = 0; li < c.layers.size(); ++li)
      for (auto& g : c.layers[li]) g.layer = static_cast<int>(li);
    int sweeps = 0;
    const int nl = static_cast<int>(order.size());
    sweep_to_convergence(c, t, chi_env, 0, nl, rel_tol, &sweeps);
    const double ov =
        sweep_to_convergence(c, t, chi_env, 0, c.n_gates(), rel_tol, &sweeps);
    rep.overlaps_per_layer.push_back(ov);
    rep.sweeps_per_stage.push_back(sweeps);
    rep.final_overlap = ov;
  }
  if (report) *report = std::move(rep);
  return c;
}

std::string serialize_circuit(const StaircaseCircuit& c) {
  std::ostringstream out;
  out << "SU4C1 " << c.n_qubits << ' ' << c.center_bond << ' '
      << c.layers.size() << '\n';
  for (std::size_t li = 0; li < c.layers.size(); ++li)
    for (const auto& g : c.layers[li]) {
      out << "G " << li << ' ' << g.i << ' ' << g.j << '\n';
      for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) {
          if (col) out << ' ';
          out << fmt_g17(g.u(r, col).real()) << ' '
              << fmt_g17(g.u(r, col).imag());
        }
        out << '\n';
      }
    }
  return out.str();
}

StaircaseCircuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  if (!(in >> magic) || magic != "SU4C1")
    throw ParseError("circuit: bad magic, expected SU4C1");
  StaircaseCircuit c;
  int n_layers = 0;
  if (!(in >> c.n_qubits >> c.center_bond >> n_layers))
    throw ParseError("circuit: bad header");
  if (n_layers < 0) throw ParseError("circuit: negative layer count");
  c.layers.assign(n_layers, {});
  std::string tag;
  while (in >> tag) {
    if (tag != "G") throw ParseError("circuit: expected G record, got " + tag);
    Su4Gate g;
    if (!(in >> g.layer >> g.i >> g.j))
      throw ParseError("circuit: bad gate header");
    if (g.layer < 0 || g.layer >= n_layers)
      throw ParseError("circuit: gate layer out of range");
    for (int r = 0; r < 4; ++r)
      for (int col = 0; col < 4; ++col) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im)) throw ParseError("circuit: bad gate entries");
        g.u(r, col) = cplx(re, im);
      }
    c.layers[g.layer].push_back(std::move(g));
  }
  validate_circuit(c);
  return c;
}

void save_circuit(const StaircaseCircuit& c, const std::string& path) {
  write_text_file(path, serialize_circuit(c));
}

StaircaseCircuit load_circuit(const std::string& path) {
  return parse_circuit(read_text_file(path));
}

}  // namespace tnprep
