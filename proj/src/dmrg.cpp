#include "tnprep/dmrg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "tnprep/hamiltonian.hpp"

namespace tnprep {

namespace {

using Theta = std::array<Mat, 4>;  // blocks [s1*2+s2], each (chi_l x chi_r)

Vec pack(const Theta& t) {
  const int cl = static_cast<int>(t[0].rows());
  const int cr = static_cast<int>(t[0].cols());
  Vec v(4 * cl * cr);
  for (int b = 0; b < 4; ++b)
    for (int l = 0; l < cl; ++l)
      for (int r = 0; r < cr; ++r) v((b * cl + l) * cr + r) = t[b](l, r);
  return v;
}

Theta unpack(const Vec& v, int cl, int cr) {
  Theta t;
  for (int b = 0; b < 4; ++b) {
    t[b].resize(cl, cr);
    for (int l = 0; l < cl; ++l)
      for (int r = 0; r < cr; ++r) t[b](l, r) = v((b * cl + l) * cr + r);
  }
  return t;
}

// MPO sandwich environments. lenv[i] covers sites < i, renv[i] covers
// sites >= i; each is one (chi_bra x chi_ket) matrix per MPO bond index.
using Env = std::vector<Mat>;

Env transfer_left(const Env& l, const MpoTensor& w, const MpsTensor& a) {
  const int wr = w.wr();
  Env out(wr);
  for (int b = 0; b < wr; ++b)
    out[b] = Mat::Zero(a.chi_r(), a.chi_r());
  for (int so = 0; so < 2; ++so)
    for (int si = 0; si < 2; ++si)
      for (int ai = 0; ai < w.wl(); ++ai) {
        const Mat base = a.m[so].adjoint() * l[ai] * a.m[si];
        for (int b = 0; b < wr; ++b) {
          const cplx c = w.w[so][si](ai, b);
          if (c != 0.0) out[b] += c * base;
        }
      }
  return out;
}

Env transfer_right(const Env& r, const MpoTensor& w, const MpsTensor& b) {
  const int wl = w.wl();
  Env out(wl);
  for (int a = 0; a < wl; ++a) out[a] = Mat::Zero(b.chi_l(), b.chi_l());
  for (int so = 0; so < 2; ++so)
    for (int si = 0; si < 2; ++si)
      for (int bi = 0; bi < w.wr(); ++bi) {
        const Mat base = b.m[so].conjugate() * r[bi] * b.m[si].transpose();
        for (int a = 0; a < wl; ++a) {
          const cplx c = w.w[so][si](a, bi);
          if (c != 0.0) out[a] += c * base;
        }
      }
  return out;
}

// Overlap environments against one fixed penalty state phi (chi_phi x chi_psi
// matrices; lov[i] covers sites < i, rov[i] covers sites >= i).
struct PenaltyEnv {
  const Mps* phi = nullptr;
  std::vector<Mat> lov;
  std::vector<Mat> rov;
};

Mat ov_left(const Mat& l, const MpsTensor& phi, const MpsTensor& psi) {
  Mat out = Mat::Zero(phi.chi_r(), psi.chi_r());
  for (int s = 0; s < 2; ++s) out += phi.m[s].adjoint() * l * psi.m[s];
  return out;
}

Mat ov_right(const Mat& r, const MpsTensor& phi, const MpsTensor& psi) {
  Mat out = Mat::Zero(phi.chi_l(), psi.chi_l());
  for (int s = 0; s < 2; ++s)
    out += phi.m[s].conjugate() * r * psi.m[s].transpose();
  return out;
}

// Minimal-eigenpair Lanczos with full reorthogonalization and early exit on
// Ritz-value stagnation. Returns the subspace dimension actually used.
struct LanczosOut {
  double value = 0.0;
  Vec vec;
  int dim = 0;
};

LanczosOut lanczos_lowest(const std::function<Vec(const Vec&)>& apply,
                          const Vec& init, int max_dim) {
  const double nrm = init.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw ConvergenceError("lanczos: invalid start vector");
  std::vector<Vec> basis;
  basis.push_back(init / nrm);
  std::vector<double> alpha, beta;  // beta[j] couples basis[j] and basis[j+1]
  double scale = 1.0;
  double ritz = 0.0;
  int m = 0;
  Eigen::VectorXd ritz_vec;
  for (int j = 0; j < max_dim; ++j) {
    Vec w = apply(basis[j]);
    if (!w.allFinite()) throw ConvergenceError("lanczos: non-finite apply");
    scale = std::max(scale, w.norm());
    alpha.push_back(basis[j].dot(w).real());
    // two-pass full reorthogonalization (subspace is tiny)
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : basis) w -= u.dot(w) * u;
    m = j + 1;
    // lowest Ritz pair of the current tridiagonal block
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int t = 0; t < m; ++t) tri(t, t) = alpha[t];
    for (int t = 0; t + 1 < m; ++t) tri(t, t + 1) = tri(t + 1, t) = beta[t];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    ritz = es.eigenvalues()(0);
    ritz_vec = es.eigenvectors().col(0);
    const double b = w.norm();
    // residual of the Ritz pair is beta * |last eigvec component|
    const double resid = b * std::abs(ritz_vec(m - 1));
    if (b < 1e-12 * scale || resid < 1e-11 * std::max(1.0, std::abs(ritz)) ||
        j + 1 == max_dim)
      break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  LanczosOut out;
  out.dim = m;
  out.value = ritz;
  out.vec = Vec::Zero(init.size());
  for (int t = 0; t < m; ++t) out.vec += ritz_vec(t) * basis[t];
  out.vec.normalize();
  return out;
}

struct Solver {
  const Mpo* h = nullptr;           // operator actually minimized
  const Mpo* h_plain = nullptr;     // physical H (for the reported energy)
  DmrgConfig cfg;
  std::vector<const Mps*> prev;     // penalty states
  Mps psi;
  std::vector<Env> lenv, renv;      // n+1 entries each
  std::vector<PenaltyEnv> pen;
  Rng rng;
  double target_np = -1.0, target_nn = -1.0;

  Solver(const Mpo& hh, const Mpo& hp, const DmrgConfig& c,
         std::vector<const Mps*> prev_states, const Mps& init)
      : h(&hh), h_plain(&hp), cfg(c), prev(std::move(prev_states)),
        rng(c.seed) {
    const int n = hh.n_sites();
    if (n < 2) throw ValidationError("dmrg: need at least 2 sites");
    if (init.n_sites() != n)
      throw ValidationError("dmrg: init/hamiltonian site mismatch");
    if (cfg.chi_max < 1) throw ValidationError("dmrg: chi_max must be >= 1");
    if (cfg.sv_tol < 0.0) throw ValidationError("dmrg: sv_tol must be >= 0");
    if (cfg.penalty_weight_mev <= 0.0)
      throw ValidationError("dmrg: penalty_weight_mev must be > 0");
    if (cfg.lanczos_dim < 2)
      throw ValidationError("dmrg: lanczos_dim must be >= 2");
    if (cfg.max_sweeps < 1)
      throw ValidationError("dmrg: max_sweeps must be >= 1");
    for (const Mps* p : prev)
      if (p->n_sites() != n)
        throw ValidationError("dmrg: penalty state site mismatch");
    if (!cfg.proton_sites.empty() || !cfg.neutron_sites.empty()) {
      const auto occ = site_occupations(init);
      double np = 0.0, nn = 0.0;
      for (int s : cfg.proton_sites) np += occ.at(s);
      for (int s : cfg.neutron_sites) nn += occ.at(s);
      target_np = std::round(np);
      target_nn = std::round(nn);
    }
    psi = init;
    normalize(psi);
    truncate(psi, cfg.chi_max, 0.0);
    normalize(psi);
    canonicalize(psi, 0);
  }

  void build_right_envs() {
    const int n = psi.n_sites();
    lenv.assign(n + 1, Env{});
    renv.assign(n + 1, Env{});
    lenv[0] = Env{Mat::Ones(1, 1)};
    renv[n] = Env{Mat::Ones(1, 1)};
    for (int i = n - 1; i >= 1; --i)
      renv[i] = transfer_right(renv[i + 1], h->tensors[i], psi.tensors[i]);
    pen.clear();
    for (const Mps* p : prev) {
      PenaltyEnv pe;
      pe.phi = p;
      pe.lov.assign(n + 1, Mat());
      pe.rov.assign(n + 1, Mat());
      pe.lov[0] = Mat::Ones(1, 1);
      pe.rov[n] = Mat::Ones(1, 1);
      for (int i = n - 1; i >= 1; --i)
        pe.rov[i] = ov_right(pe.rov[i + 1], p->tensors[i], psi.tensors[i]);
      pen.push_back(std::move(pe));
    }
  }

  // Effective operator application at bond (i, i+1).
  Vec apply_heff(int i, const Vec& v, int cl, int cr) const {
    const Theta t = unpack(v, cl, cr);
    const MpoTensor& w1 = h->tensors[i];
    const MpoTensor& w2 = h->tensors[i + 1];
    const Env& le = lenv[i];
    const Env& re = renv[i + 2];
    const int wl = w1.wl(), wm = w1.wr(), wr = w2.wr();
    // X[a][s1][s2] = L[a] * T[s1][s2]
    std::vector<std::array<Mat, 4>> x(wl);
    for (int a = 0; a < wl; ++a)
      for (int b = 0; b < 4; ++b) x[a][b] = le[a] * t[b];
    // Q[b][s1'][s2] = sum_{a,s1} W1[s1'][s1](a,b) X[a][s1*2+s2... ]
    std::vector<std::array<Mat, 4>> q(wm);
    for (int b = 0; b < wm; ++b)
      for (int k = 0; k < 4; ++k) q[b][k] = Mat::Zero(cl, cr);
    for (int s1o = 0; s1o < 2; ++s1o)
      for (int s1i = 0; s1i < 2; ++s1i)
        for (int a = 0; a < wl; ++a)
          for (int b = 0; b < wm; ++b) {
            const cplx c = w1.w[s1o][s1i](a, b);
            if (c == 0.0) continue;
            for (int s2 = 0; s2 < 2; ++s2)
              q[b][s1o * 2 + s2] += c * x[a][s1i * 2 + s2];
          }
    // S[c][s1'][s2'] = sum_{b,s2} W2[s2'][s2](b,c) Q[b][s1'][s2]
    std::vector<std::array<Mat, 4>> sc(wr);
    for (int c = 0; c < wr; ++c)
      for (int k = 0; k < 4; ++k) sc[c][k] = Mat::Zero(cl, cr);
    for (int s2o = 0; s2o < 2; ++s2o)
      for (int s2i = 0; s2i < 2; ++s2i)
        for (int b = 0; b < wm; ++b)
          for (int c = 0; c < wr; ++c) {
            const cplx w = w2.w[s2o][s2i](b, c);
            if (w == 0.0) continue;
            for (int s1 = 0; s1 < 2; ++s1)
              sc[c][s1 * 2 + s2o] += w * q[b][s1 * 2 + s2i];
          }
    Theta y;
    for (int k = 0; k < 4; ++k) y[k] = Mat::Zero(cl, cr);
    for (int c = 0; c < wr; ++c)
      for (int k = 0; k < 4; ++k) y[k] += sc[c][k] * re[c].transpose();
    Vec out = pack(y);
    // penalty projectors w * G (G^dagger v)
    for (const PenaltyEnv& pe : pen) {
      const Mps& phi = *pe.phi;
      Theta g;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          g[s1 * 2 + s2] =
              (pe.lov[i].transpose() *
               (phi.tensors[i].m[s1] * phi.tensors[i + 1].m[s2]).conjugate() *
               pe.rov[i + 2])
                  .conjugate();
      const Vec gv = pack(g);
      out += cfg.penalty_weight_mev * gv.dot(v) * gv;
    }
    return out;
  }

  // Shallow local solves during the first sweeps keep the update gentle while
  // the environments are still far from self-consistent; a fully converged
  // local ground state there commits the sweep to whichever manifold looks
  // best locally and the truncation makes that choice irreversible.
  int lanczos_cap = 1 << 20;

  // Local solve. An early Lanczos termination with full reorthogonalization
  // means an invariant subspace was exhausted and is accepted as-is (a random
  // replacement vector would leak particle number out of the sector). Fresh
  // random restarts only answer genuine numerical failure.
  Vec solve_local(int i, const Vec& init) {
    const int cl = psi.tensors[i].chi_l();
    const int cr = psi.tensors[i + 1].chi_r();
    auto apply = [&](const Vec& v) { return apply_heff(i, v, cl, cr); };
    const int dim = std::min(cfg.lanczos_dim, lanczos_cap);
    Vec start = init;
    for (int attempt = 0;; ++attempt) {
      try {
        return lanczos_lowest(apply, start, dim).vec;
      } catch (const ConvergenceError&) {
        if (attempt >= 3) throw;
        start.resize(init.size());
        for (int t = 0; t < start.size(); ++t)
          start(t) = cplx(rng.normal(), rng.normal());
      }
    }
  }

  // Splits theta back into site tensors; returns the discarded weight.
  // alpha > 0 widens the SVD with the half-applied MPO blocks (density-matrix
  // noise enrichment): the kept basis gains the quantum-number blocks H
  // connects to, which plain two-site truncation can never revive once their
  // weight hits zero, while the stored state stays the exact projection of
  // theta onto that basis.
  double split(int i, const Vec& tv, bool move_right, double alpha);

  double objective() const {
    double e = expectation(*h, psi);
    for (const Mps* p : prev) {
      const double ov = std::abs(overlap(*p, psi));
      e += cfg.penalty_weight_mev * ov * ov;
    }
    return e;
  }

  void check_leakage() const {
    if (target_np < 0.0 && target_nn < 0.0) return;
    const auto occ = site_occupations(psi);
    double np = 0.0, nn = 0.0;
    for (int s : cfg.proton_sites) np += occ.at(s);
    for (int s : cfg.neutron_sites) nn += occ.at(s);
    if (std::abs(np - target_np) > cfg.leakage_tol ||
        std::abs(nn - target_nn) > cfg.leakage_tol) {
      std::ostringstream msg;
      msg << "dmrg: sector leakage (N_p " << np << " vs " << target_np
          << ", N_n " << nn << " vs " << target_nn << ")";
      throw ConvergenceError(msg.str());
    }
  }

  EigenResult run();
};

// Truncated SVD split with the same Eigen-BDCSVD residual guard as mps.cpp.
double Solver::split(int i, const Vec& tv, bool move_right, double alpha) {
  const int cl = psi.tensors[i].chi_l();
  const int cr = psi.tensors[i + 1].chi_r();
  const Theta t = unpack(tv, cl, cr);
  Mat m(2 * cl, 2 * cr);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      m.block(s1 * cl, s2 * cr, cl, cr) = t[s1 * 2 + s2];
  // One enrichment block per middle MPO bond index, normalized to alpha.
  std::vector<Mat> extra;
  if (alpha > 0.0) {
    if (move_right) {
      const MpoTensor& w1 = h->tensors[i];
      const Env& le = lenv[i];
      const int wl = w1.wl(), wm = w1.wr();
      std::vector<std::array<Mat, 4>> x(wl);
      for (int a = 0; a < wl; ++a)
        for (int k = 0; k < 4; ++k) x[a][k] = le[a] * t[k];
      for (int b = 0; b < wm; ++b) {
        Mat q = Mat::Zero(2 * cl, 2 * cr);
        for (int s1o = 0; s1o < 2; ++s1o)
          for (int s1i = 0; s1i < 2; ++s1i)
            for (int a = 0; a < wl; ++a) {
              const cplx c = w1.w[s1o][s1i](a, b);
              if (c == 0.0) continue;
              for (int s2 = 0; s2 < 2; ++s2)
                q.block(s1o * cl, s2 * cr, cl, cr) += c * x[a][s1i * 2 + s2];
            }
        const double nq = q.norm();
        if (nq > 1e-14) extra.push_back((alpha / nq) * q);
      }
    } else {
      const MpoTensor& w2 = h->tensors[i + 1];
      const Env& re = renv[i + 2];
      const int wm = w2.wl(), wr = w2.wr();
      std::vector<std::array<Mat, 4>> z(wr);
      for (int c = 0; c < wr; ++c)
        for (int k = 0; k < 4; ++k) z[c][k] = t[k] * re[c].transpose();
      for (int b = 0; b < wm; ++b) {
        Mat y = Mat::Zero(2 * cl, 2 * cr);
        for (int s2o = 0; s2o < 2; ++s2o)
          for (int s2i = 0; s2i < 2; ++s2i)
            for (int c = 0; c < wr; ++c) {
              const cplx w = w2.w[s2o][s2i](b, c);
              if (w == 0.0) continue;
              for (int s1 = 0; s1 < 2; ++s1)
                y.block(s1 * cl, s2o * cr, cl, cr) += w * z[c][s1 * 2 + s2i];
            }
        const double ny = y.norm();
        if (ny > 1e-14) extra.push_back((alpha / ny) * y);
      }
    }
  }
  // The enrichment blocks widen the factored matrix (extra columns moving
  // right, extra rows moving left) so the kept isometry spans them too; the
  // opposite tensor is theta projected onto that basis, never the noise.
  Mat wide;
  if (extra.empty()) {
    wide = m;
  } else if (move_right) {
    wide.resize(2 * cl, static_cast<Eigen::Index>(2 * cr) *
                            static_cast<Eigen::Index>(1 + extra.size()));
    wide.leftCols(2 * cr) = m;
    for (size_t j = 0; j < extra.size(); ++j)
      wide.middleCols(2 * cr * static_cast<Eigen::Index>(j + 1), 2 * cr) =
          extra[j];
  } else {
    wide.resize(static_cast<Eigen::Index>(2 * cl) *
                    static_cast<Eigen::Index>(1 + extra.size()),
                2 * cr);
    wide.topRows(2 * cl) = m;
    for (size_t j = 0; j < extra.size(); ++j)
      wide.middleRows(2 * cl * static_cast<Eigen::Index>(j + 1), 2 * cl) =
          extra[j];
  }
  Eigen::BDCSVD<Mat> svd(wide, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Mat u = svd.matrixU();
  Eigen::VectorXd s = svd.singularValues();
  Mat v = svd.matrixV();
  const double resid =
      (u * s.asDiagonal() * v.adjoint() - wide).cwiseAbs().maxCoeff();
  if (resid > 1e-10 * std::max(1.0, s.size() > 0 ? s(0) : 0.0)) {
    Eigen::JacobiSVD<Mat> jac(wide, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = jac.matrixU();
    s = jac.singularValues();
    v = jac.matrixV();
  }
  const int full = static_cast<int>(s.size());
  const double total = s.norm();
  int k = std::min(full, cfg.chi_max);
  if (total > 0.0 && cfg.sv_tol > 0.0)
    while (k > 1 && s(k - 1) < cfg.sv_tol * total) --k;
  if (k < 1) k = 1;
  const double m2 = m.squaredNorm();
  double kept2 = 0.0;
  MpsTensor a, b;
  if (move_right) {
    const Mat uk = u.leftCols(k);
    a.m[0] = uk.topRows(cl);
    a.m[1] = uk.bottomRows(cl);
    Mat bm = uk.adjoint() * m;
    const double nb = bm.norm();
    kept2 = nb * nb;
    if (nb > 0.0) bm /= nb;
    b.m[0] = bm.leftCols(cr);
    b.m[1] = bm.rightCols(cr);
    psi.center = i + 1;
  } else {
    const Mat vk = v.leftCols(k);
    Mat am = m * vk;
    const double na = am.norm();
    kept2 = na * na;
    if (na > 0.0) am /= na;
    a.m[0] = am.topRows(cl);
    a.m[1] = am.bottomRows(cl);
    const Mat bt = vk.adjoint();
    b.m[0] = bt.leftCols(cr);
    b.m[1] = bt.rightCols(cr);
    psi.center = i;
  }
  psi.tensors[i] = std::move(a);
  psi.tensors[i + 1] = std::move(b);
  return m2 > 0.0 ? std::max(0.0, 1.0 - kept2 / m2) : 0.0;
}

EigenResult Solver::run() {
  const int n = psi.n_sites();
  build_right_envs();
  EigenResult res;
  // The start state is the baseline: a warm start that no sweep improves on
  // is returned unchanged.
  double best_obj = objective();
  Mps best_state = psi;
  double prev_obj = best_obj;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    // Enrichment decays over the early sweeps and is off for the endgame so
    // the stopping rules judge the plain truncated update.
    const double alpha =
        sweep <= 6 ? 1e-2 * std::pow(10.0, -(sweep - 1)) : 0.0;
    lanczos_cap = sweep <= 2 ? 2 + 2 * sweep : (1 << 20);
    double trunc_sum = 0.0;
    // left -> right
    for (int i = 0; i + 1 < n; ++i) {
      Theta t0;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          t0[s1 * 2 + s2] = psi.tensors[i].m[s1] * psi.tensors[i + 1].m[s2];
      const Vec theta = solve_local(i, pack(t0));
      trunc_sum += split(i, theta, true, alpha);
      lenv[i + 1] = transfer_left(lenv[i], h->tensors[i], psi.tensors[i]);
      for (PenaltyEnv& pe : pen)
        pe.lov[i + 1] =
            ov_left(pe.lov[i], pe.phi->tensors[i], psi.tensors[i]);
    }
    // right -> left
    for (int i = n - 2; i >= 0; --i) {
      Theta t0;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          t0[s1 * 2 + s2] = psi.tensors[i].m[s1] * psi.tensors[i + 1].m[s2];
      const Vec theta = solve_local(i, pack(t0));
      trunc_sum += split(i, theta, false, alpha);
      renv[i + 1] =
          transfer_right(renv[i + 2], h->tensors[i + 1], psi.tensors[i + 1]);
      for (PenaltyEnv& pe : pen)
        pe.rov[i + 1] =
            ov_right(pe.rov[i + 2], pe.phi->tensors[i + 1],
                     psi.tensors[i + 1]);
    }
    psi.norm = 1.0;
    const double obj = objective();
    if (obj > best_obj + 1e-10) {
      // Active enrichment may wobble uphill while it eats bond budget: skip
      // the record and keep sweeping. Without it a rise means the truncation
      // floor was hit: restore the better state and stop.
      if (alpha > 0.0) continue;
      psi = best_state;
      res.converged = true;
      break;
    }
    res.sweeps.push_back({sweep, obj, psi.max_bond(), trunc_sum});
    if (obj < best_obj) {
      best_obj = obj;
      best_state = psi;
    }
    if (std::abs(obj - prev_obj) <=
        cfg.energy_rtol * std::max(1.0, std::abs(obj))) {
      res.converged = true;
      break;
    }
    prev_obj = obj;
  }
  psi = best_state;
  normalize(psi);
  canonicalize(psi, 0);
  check_leakage();
  res.state = psi;
  res.energy_mev = expectation(*h_plain, res.state);
  return res;
}

// H plus the quadratic particle-number penalty when the config asks for one;
// the penalty vanishes identically on the target sector, so in-sector
// energies and records are unchanged while every other sector is lifted.
Mpo solved_operator(const Mpo& h, const DmrgConfig& cfg, const Mps& init) {
  if (cfg.number_penalty_kappa <= 0.0 ||
      (cfg.proton_sites.empty() && cfg.neutron_sites.empty()))
    return h;
  QubitMapping qm;
  qm.n_sites = h.n_sites();
  qm.tz2_of_site.assign(h.n_sites(), -1);
  for (int s : cfg.proton_sites) qm.tz2_of_site.at(s) = 1;
  qm.site_of_orbital.resize(qm.n_sites);
  qm.orbital_of_site.resize(qm.n_sites);
  for (int s = 0; s < qm.n_sites; ++s)
    qm.site_of_orbital[s] = qm.orbital_of_site[s] = s;
  const auto occ = site_occupations(init);
  SymmetrySector sector;
  double np = 0.0, nn = 0.0;
  for (int s : cfg.proton_sites) np += occ.at(s);
  for (int s : cfg.neutron_sites) nn += occ.at(s);
  sector.n_protons = static_cast<int>(std::lround(np));
  sector.n_neutrons = static_cast<int>(std::lround(nn));
  Mpo solved =
      mpo_sum(h, number_penalty_mpo(qm, sector, cfg.number_penalty_kappa));
  mpo_compress(solved, 1e-12);
  return solved;
}

}  // namespace

EigenResult ground_state(const Mpo& h, const DmrgConfig& cfg, const Mps& init) {
  const Mpo solved = solved_operator(h, cfg, init);
  Solver s(solved, h, cfg, {}, init);
  EigenResult res = s.run();
  res.lambda = 0;
  return res;
}

std::vector<EigenResult> excited_states(const Mpo& h, const DmrgConfig& cfg,
                                        int k, const Mps& init) {
  if (k < 1) throw ValidationError("excited_states: k must be >= 1");
  const Mpo solved = solved_operator(h, cfg, init);
  std::vector<EigenResult> results;
  for (int lam = 0; lam < k; ++lam) {
    std::vector<const Mps*> prev;
    for (const auto& r : results) prev.push_back(&r.state);
    DmrgConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(lam);
    Solver s(solved, h, c, prev, init);
    EigenResult res = s.run();
    res.lambda = lam;
    results.push_back(std::move(res));
  }
  for (std::size_t a = 0; a < results.size(); ++a)
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      const double ov = std::abs(overlap(results[a].state, results[b].state));
      if (ov > 1e-4) {
        std::ostringstream msg;
        msg << "excited_states: states " << a << " and " << b
            << " overlap at " << ov << " (penalty weight too small)";
        throw ConvergenceError(msg.str());
      }
    }
  std::stable_sort(results.begin(), results.end(),
                   [](const EigenResult& a, const EigenResult& b) {
                     return a.energy_mev < b.energy_mev;
                   });
  for (std::size_t j = 0; j < results.size(); ++j)
    results[j].lambda = static_cast<int>(j);
  return results;
}

std::vector<EigenResult> reverse_sweep_series(const Mpo& h,
                                              const std::vector<int>& chis,
                                              const DmrgConfig& cfg,
                                              const Mps& init) {
  if (chis.empty())
    throw ValidationError("reverse_sweep_series: empty chi list");
  for (std::size_t j = 0; j + 1 < chis.size(); ++j)
    if (chis[j + 1] > chis[j])
      throw ValidationError("reverse_sweep_series: chis must be descending");
  std::vector<EigenResult> results;
  const Mps* start = &init;
  for (int chi : chis) {
    DmrgConfig c = cfg;
    c.chi_max = chi;
    results.push_back(ground_state(h, c, *start));
    start = &results.back().state;
  }
  return results;
}

std::string sweep_records_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << "sweep,energy_MeV,max_bond,truncation_error_sum\n";
  for (const auto& r : records)
    out << r.sweep << ',' << fmt_g17(r.energy_mev) << ',' << r.max_bond << ','
        << fmt_g17(r.truncation_error_sum) << '\n';
  return out.str();
}

}  // namespace tnprep
