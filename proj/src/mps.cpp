#include "tnprep/mps.hpp"

#include <cmath>
#include <sstream>

namespace tnprep {

namespace {

// Thin QR: A = Q R with Q (rows x k), R (k x cols), k = min(rows, cols).
void thin_qr(const Mat& a, Mat* q, Mat* r) {
  const int k = static_cast<int>(std::min(a.rows(), a.cols()));
  Eigen::HouseholderQR<Mat> qr(a);
  *q = qr.householderQ() * Mat::Identity(a.rows(), k);
  *r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
}

// Stacked matricization of a site tensor: row (s, l) = s*chi_l + l.
Mat stack_rows(const MpsTensor& t) {
  const int cl = t.chi_l(), cr = t.chi_r();
  Mat a(2 * cl, cr);
  a.topRows(cl) = t.m[0];
  a.bottomRows(cl) = t.m[1];
  return a;
}

void unstack_rows(const Mat& a, MpsTensor* t) {
  const int cl = static_cast<int>(a.rows()) / 2;
  t->m[0] = a.topRows(cl);
  t->m[1] = a.bottomRows(cl);
}

// Row-wise matricization: row l, column (s, r) = s*chi_r + r.
Mat stack_cols(const MpsTensor& t) {
  const int cl = t.chi_l(), cr = t.chi_r();
  Mat a(cl, 2 * cr);
  a.leftCols(cr) = t.m[0];
  a.rightCols(cr) = t.m[1];
  return a;
}

void unstack_cols(const Mat& a, MpsTensor* t) {
  const int cr = static_cast<int>(a.cols()) / 2;
  t->m[0] = a.leftCols(cr);
  t->m[1] = a.rightCols(cr);
}

struct SvdParts {
  Mat u;
  Eigen::VectorXd s;
  Mat v;
};

// BDCSVD with a residual check; Eigen 3.4.0's divide-and-conquer path can
// return a wrong factorization for some small matrices, so fall back to the
// (slower, reliable) Jacobi SVD when the reconstruction is off.
SvdParts robust_svd(const Mat& m) {
  SvdParts p;
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  p.u = svd.matrixU();
  p.s = svd.singularValues();
  p.v = svd.matrixV();
  const double scale = p.s.size() > 0 ? p.s(0) : 0.0;
  const double resid =
      (p.u * p.s.asDiagonal() * p.v.adjoint() - m).cwiseAbs().maxCoeff();
  if (resid > 1e-10 * std::max(1.0, scale)) {
    Eigen::JacobiSVD<Mat> jac(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    p.u = jac.matrixU();
    p.s = jac.singularValues();
    p.v = jac.matrixV();
  }
  return p;
}

struct SvdSplit {
  Mat u;          // rows x k
  Mat sv;         // k x cols (S V^dagger)
  int k = 0;
  double discarded = 0.0;  // sum of dropped (s_j / ||s||)^2
};

// SVD with truncation: keeps at most chi_max values (0 = unbounded) and drops
// singular values below sv_tol relative to the vector norm ||s||_2.
SvdSplit svd_truncate(const Mat& m, int chi_max, double sv_tol) {
  const SvdParts svd = robust_svd(m);
  const auto& s = svd.s;
  const int full = static_cast<int>(s.size());
  const double total = s.norm();
  int k = full;
  if (chi_max > 0 && k > chi_max) k = chi_max;
  if (total > 0.0 && sv_tol > 0.0) {
    while (k > 1 && s(k - 1) < sv_tol * total) --k;
  }
  if (k < 1) k = 1;
  SvdSplit out;
  out.k = k;
  double dropped = 0.0;
  for (int j = k; j < full; ++j) dropped += s(j) * s(j);
  out.discarded = total > 0.0 ? dropped / (total * total) : 0.0;
  out.u = svd.u.leftCols(k);
  out.sv = s.head(k).asDiagonal() * svd.v.leftCols(k).adjoint();
  return out;
}

void check_site(const Mps& psi, int site) {
  if (site < 0 || site >= psi.n_sites())
    throw ValidationError("site index out of range");
}

}  // namespace

std::vector<int> Mps::bond_dims() const {
  std::vector<int> d;
  for (int i = 0; i + 1 < n_sites(); ++i) d.push_back(tensors[i].chi_r());
  return d;
}

int Mps::max_bond() const {
  int m = 1;
  for (int d : bond_dims()) m = std::max(m, d);
  return m;
}

int Mpo::max_bond() const {
  int m = 1;
  for (int i = 0; i + 1 < n_sites(); ++i)
    m = std::max(m, tensors[i].wr());
  return m;
}

Mps product_state(const std::vector<int>& bits) {
  if (bits.empty()) throw ValidationError("product_state: no sites");
  Mps psi;
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("product_state: bits must be 0/1");
    MpsTensor t;
    t.m[0] = Mat::Constant(1, 1, b == 0 ? 1.0 : 0.0);
    t.m[1] = Mat::Constant(1, 1, b == 1 ? 1.0 : 0.0);
    psi.tensors.push_back(std::move(t));
  }
  psi.center = 0;
  psi.norm = 1.0;
  return psi;
}

void canonicalize(Mps& psi, int site) {
  check_site(psi, site);
  const int n = psi.n_sites();
  // Left-canonicalize 0..site-1.
  for (int i = 0; i < site; ++i) {
    Mat q, r;
    thin_qr(stack_rows(psi.tensors[i]), &q, &r);
    unstack_rows(q, &psi.tensors[i]);
    psi.tensors[i + 1].m[0] = r * psi.tensors[i + 1].m[0];
    psi.tensors[i + 1].m[1] = r * psi.tensors[i + 1].m[1];
  }
  // Right-canonicalize n-1..site+1.
  for (int i = n - 1; i > site; --i) {
    Mat b = stack_cols(psi.tensors[i]);
    Mat qt, rt;
    thin_qr(b.adjoint(), &qt, &rt);
    unstack_cols(qt.adjoint(), &psi.tensors[i]);
    const Mat l = rt.adjoint();
    psi.tensors[i - 1].m[0] = psi.tensors[i - 1].m[0] * l;
    psi.tensors[i - 1].m[1] = psi.tensors[i - 1].m[1] * l;
  }
  if (psi.norm != 1.0) {
    psi.tensors[site].m[0] *= psi.norm;
    psi.tensors[site].m[1] *= psi.norm;
    psi.norm = 1.0;
  }
  psi.center = site;
}

double truncate(Mps& psi, int chi_max, double sv_tol) {
  canonicalize(psi, 0);
  const int n = psi.n_sites();
  double discarded = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    SvdSplit s = svd_truncate(stack_rows(psi.tensors[i]), chi_max, sv_tol);
    discarded += s.discarded;
    unstack_rows(s.u, &psi.tensors[i]);
    psi.tensors[i + 1].m[0] = s.sv * psi.tensors[i + 1].m[0];
    psi.tensors[i + 1].m[1] = s.sv * psi.tensors[i + 1].m[1];
  }
  psi.center = n - 1;
  return discarded;
}

void normalize(Mps& psi) {
  const int c = psi.center >= 0 ? psi.center : 0;
  canonicalize(psi, c);
  const double f = std::sqrt(psi.tensors[c].m[0].squaredNorm() +
                             psi.tensors[c].m[1].squaredNorm());
  if (f <= 0.0) throw ValidationError("normalize: zero state");
  psi.tensors[c].m[0] /= f;
  psi.tensors[c].m[1] /= f;
  psi.norm = 1.0;
}

cplx overlap(const Mps& a, const Mps& b) {
  if (a.n_sites() != b.n_sites())
    throw ValidationError("overlap: size mismatch");
  Mat e = Mat::Ones(1, 1);
  for (int i = 0; i < a.n_sites(); ++i) {
    const auto& ta = a.tensors[i];
    const auto& tb = b.tensors[i];
    Mat next = Mat::Zero(ta.chi_r(), tb.chi_r());
    for (int s = 0; s < 2; ++s) next += ta.m[s].adjoint() * e * tb.m[s];
    e = std::move(next);
  }
  return a.norm * b.norm * e(0, 0);
}

double expectation(const Mpo& op, const Mps& psi) {
  if (op.n_sites() != psi.n_sites())
    throw ValidationError("expectation: size mismatch");
  std::vector<Mat> e = {Mat::Ones(1, 1)};  // e[w] is chi_bra x chi_ket
  for (int i = 0; i < psi.n_sites(); ++i) {
    const auto& t = psi.tensors[i];
    const auto& w = op.tensors[i];
    std::vector<Mat> next(w.wr(), Mat::Zero(t.chi_r(), t.chi_r()));
    for (int wl = 0; wl < w.wl(); ++wl) {
      std::array<Mat, 2> e_t;  // e[wl] * t.m[si]
      for (int si = 0; si < 2; ++si) e_t[si] = e[wl] * t.m[si];
      for (int wr = 0; wr < w.wr(); ++wr)
        for (int so = 0; so < 2; ++so)
          for (int si = 0; si < 2; ++si) {
            const cplx coef = w.w[so][si](wl, wr);
            if (coef == cplx(0.0)) continue;
            next[wr].noalias() += coef * (t.m[so].adjoint() * e_t[si]);
          }
    }
    e = std::move(next);
  }
  const cplx num = e[0](0, 0) * (psi.norm * psi.norm);
  const cplx den = overlap(psi, psi);
  if (std::abs(den) <= 0.0) throw ValidationError("expectation: zero state");
  const cplx val = num / den;
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val)))
    throw ValidationError("expectation: non-real value (non-Hermitian MPO?)");
  return val.real();
}

std::vector<double> site_occupations(const Mps& psi) {
  Mps work = psi;
  canonicalize(work, 0);
  std::vector<double> occ;
  const int n = work.n_sites();
  for (int i = 0; i < n; ++i) {
    const auto& t = work.tensors[i];
    const double n1 = t.m[1].squaredNorm();
    const double tot = n1 + t.m[0].squaredNorm();
    occ.push_back(tot > 0.0 ? n1 / tot : 0.0);
    if (i + 1 < n) {
      Mat q, r;
      thin_qr(stack_rows(work.tensors[i]), &q, &r);
      unstack_rows(q, &work.tensors[i]);
      work.tensors[i + 1].m[0] = r * work.tensors[i + 1].m[0];
      work.tensors[i + 1].m[1] = r * work.tensors[i + 1].m[1];
    }
  }
  return occ;
}

Mps compress(const Mps& target, int chi_max, int n_sweeps) {
  Mps res = target;
  truncate(res, chi_max, 1e-14);
  normalize(res);
  const int n = res.n_sites();
  if (n == 1) return res;
  canonicalize(res, 0);  // right-canonical gauge for the first sweep

  // r_env[k] = contraction of sites k..n-1 between res (bra) and target
  // (ket), indexed (r_res, r_tar).
  std::vector<Mat> r_env(n + 1);
  auto build_r = [&](int k) {
    if (k == n) {
      r_env[n] = Mat::Ones(1, 1);
      return;
    }
    const auto& a = res.tensors[k];
    const auto& b = target.tensors[k];
    Mat e = Mat::Zero(a.chi_l(), b.chi_l());
    for (int s = 0; s < 2; ++s)
      e += a.m[s].conjugate() * r_env[k + 1] * b.m[s].transpose();
    r_env[k] = std::move(e);
  };
  std::vector<Mat> l_env(n + 1);
  l_env[0] = Mat::Ones(1, 1);
  auto build_l = [&](int k) {  // l_env[k+1] from l_env[k]
    const auto& a = res.tensors[k];
    const auto& b = target.tensors[k];
    Mat e = Mat::Zero(a.chi_r(), b.chi_r());
    for (int s = 0; s < 2; ++s) e += a.m[s].adjoint() * l_env[k] * b.m[s];
    l_env[k + 1] = std::move(e);
  };

  for (int k = n; k >= 0; --k) build_r(k);

  for (int sweep = 0; sweep < n_sweeps; ++sweep) {
    // left -> right
    for (int i = 0; i + 1 < n; ++i) {
      const auto& t1 = target.tensors[i];
      const auto& t2 = target.tensors[i + 1];
      const int cl = static_cast<int>(l_env[i].rows());
      const int cr = static_cast<int>(r_env[i + 2].rows());
      Mat theta(2 * cl, 2 * cr);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          theta.block(s1 * cl, s2 * cr, cl, cr) =
              l_env[i] * t1.m[s1] * t2.m[s2] * r_env[i + 2].transpose();
      SvdSplit s = svd_truncate(theta, chi_max, 0.0);
      MpsTensor a, b;
      a.m[0] = s.u.topRows(cl);
      a.m[1] = s.u.bottomRows(cl);
      b.m[0] = s.sv.leftCols(cr);
      b.m[1] = s.sv.rightCols(cr);
      res.tensors[i] = std::move(a);
      res.tensors[i + 1] = std::move(b);
      build_l(i);
    }
    // right -> left
    for (int i = n - 2; i >= 0; --i) {
      const auto& t1 = target.tensors[i];
      const auto& t2 = target.tensors[i + 1];
      const int cl = static_cast<int>(l_env[i].rows());
      const int cr = static_cast<int>(r_env[i + 2].rows());
      Mat theta(2 * cl, 2 * cr);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          theta.block(s1 * cl, s2 * cr, cl, cr) =
              l_env[i] * t1.m[s1] * t2.m[s2] * r_env[i + 2].transpose();
      const SvdParts svd = robust_svd(theta);
      int k = static_cast<int>(svd.s.size());
      if (chi_max > 0) k = std::min(k, chi_max);
      const Mat us = svd.u.leftCols(k) * svd.s.head(k).asDiagonal();
      const Mat vd = svd.v.leftCols(k).adjoint();
      MpsTensor a, b;
      a.m[0] = us.topRows(cl);
      a.m[1] = us.bottomRows(cl);
      b.m[0] = vd.leftCols(cr);
      b.m[1] = vd.rightCols(cr);
      res.tensors[i] = std::move(a);
      res.tensors[i + 1] = std::move(b);
      build_r(i + 1);
    }
  }
  res.center = 0;
  res.norm = 1.0;
  normalize(res);
  return res;
}

double apply_gate(Mps& psi, const Mat4& g, int site, int chi_max, double sv_tol) {
  check_site(psi, site);
  if (site + 1 >= psi.n_sites())
    throw ValidationError("apply_gate: site+1 out of range");
  if ((g.adjoint() * g - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("apply_gate: gate is not unitary");
  canonicalize(psi, site);
  const auto& t1 = psi.tensors[site];
  const auto& t2 = psi.tensors[site + 1];
  const int cl = t1.chi_l(), cr = t2.chi_r();
  std::array<std::array<Mat, 2>, 2> th;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) th[s1][s2] = t1.m[s1] * t2.m[s2];
  Mat theta = Mat::Zero(2 * cl, 2 * cr);
  for (int t1i = 0; t1i < 2; ++t1i)
    for (int t2i = 0; t2i < 2; ++t2i) {
      Mat acc = Mat::Zero(cl, cr);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          const cplx coef = g(2 * t1i + t2i, 2 * s1 + s2);
          if (coef != cplx(0.0)) acc += coef * th[s1][s2];
        }
      theta.block(t1i * cl, t2i * cr, cl, cr) = acc;
    }
  SvdSplit s = svd_truncate(theta, chi_max, sv_tol);
  psi.tensors[site].m[0] = s.u.topRows(cl);
  psi.tensors[site].m[1] = s.u.bottomRows(cl);
  psi.tensors[site + 1].m[0] = s.sv.leftCols(cr);
  psi.tensors[site + 1].m[1] = s.sv.rightCols(cr);
  psi.center = site + 1;
  return s.discarded;
}

void apply_1q(Mps& psi, const Mat2& g, int site) {
  check_site(psi, site);
  if ((g.adjoint() * g - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("apply_1q: gate is not unitary");
  const auto& t = psi.tensors[site];
  std::array<Mat, 2> out;
  for (int to = 0; to < 2; ++to) out[to] = g(to, 0) * t.m[0] + g(to, 1) * t.m[1];
  psi.tensors[site].m = std::move(out);
}

Vec mps_to_statevector(const Mps& psi) {
  const int n = psi.n_sites();
  if (n > 24) throw ValidationError("mps_to_statevector: too many sites");
  Mat cur = Mat::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    const auto& t = psi.tensors[i];
    Mat next(cur.rows() * 2, t.chi_r());
    for (Eigen::Index r = 0; r < cur.rows(); ++r) {
      next.row(2 * r) = cur.row(r) * t.m[0];
      next.row(2 * r + 1) = cur.row(r) * t.m[1];
    }
    cur = std::move(next);
  }
  return psi.norm * cur.col(0);
}

Mps statevector_to_mps(const Vec& v, int chi_max, double sv_tol) {
  Eigen::Index size = v.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < size) ++n;
  if ((Eigen::Index{1} << n) != size || n == 0)
    throw ValidationError("statevector_to_mps: length is not a power of two");
  Mps psi;
  psi.tensors.resize(n);
  Mat m = v.transpose();  // 1 x 2^n, row index = bond (chi=1)
  int chi = 1;
  for (int i = 0; i + 1 < n; ++i) {
    const Eigen::Index rest = m.cols() / 2;
    Mat a(2 * chi, rest);  // row (s, l) = s*chi + l
    for (int s = 0; s < 2; ++s)
      a.middleRows(s * chi, chi) = m.middleCols(s * rest, rest);
    SvdSplit sp = svd_truncate(a, chi_max, sv_tol);
    psi.tensors[i].m[0] = sp.u.topRows(chi);
    psi.tensors[i].m[1] = sp.u.bottomRows(chi);
    m = sp.sv;
    chi = sp.k;
  }
  psi.tensors[n - 1].m[0] = m.leftCols(1);
  psi.tensors[n - 1].m[1] = m.rightCols(1);
  psi.center = n - 1;
  psi.norm = 1.0;
  return psi;
}

namespace {
Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}
}  // namespace

Mat mpo_to_dense(const Mpo& op) {
  const int n = op.n_sites();
  if (n > 14) throw ValidationError("mpo_to_dense: too many sites");
  std::vector<Mat> cur = {Mat::Ones(1, 1)};
  for (int i = 0; i < n; ++i) {
    const auto& w = op.tensors[i];
    const Eigen::Index dim = cur[0].rows() * 2;
    std::vector<Mat> next(w.wr(), Mat::Zero(dim, dim));
    for (int wl = 0; wl < w.wl(); ++wl)
      for (int wr = 0; wr < w.wr(); ++wr) {
        Mat2 site;
        site << w.w[0][0](wl, wr), w.w[0][1](wl, wr),
                w.w[1][0](wl, wr), w.w[1][1](wl, wr);
        if (site.cwiseAbs().maxCoeff() == 0.0) continue;
        next[wr] += kron(cur[wl], site);
      }
    cur = std::move(next);
  }
  return cur[0];
}

Mpo mpo_sum(const Mpo& a, const Mpo& b) {
  if (a.n_sites() != b.n_sites()) throw ValidationError("mpo_sum: size mismatch");
  const int n = a.n_sites();
  Mpo out;
  out.tensors.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& ta = a.tensors[i];
    const auto& tb = b.tensors[i];
    const int la = ta.wl(), ra = ta.wr();
    const int lb = tb.wl(), rb = tb.wr();
    const int wl = (i == 0) ? 1 : la + lb;
    const int wr = (i == n - 1) ? 1 : ra + rb;
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si) {
        Mat w = Mat::Zero(wl, wr);
        if (n == 1) {
          w = ta.w[so][si] + tb.w[so][si];
        } else if (i == 0) {
          w.block(0, 0, 1, ra) = ta.w[so][si];
          w.block(0, ra, 1, rb) = tb.w[so][si];
        } else if (i == n - 1) {
          w.block(0, 0, la, 1) = ta.w[so][si];
          w.block(la, 0, lb, 1) = tb.w[so][si];
        } else {
          w.block(0, 0, la, ra) = ta.w[so][si];
          w.block(la, ra, lb, rb) = tb.w[so][si];
        }
        out.tensors[i].w[so][si] = std::move(w);
      }
  }
  return out;
}

void mpo_compress(Mpo& op, double rel_tol) {
  const int n = op.n_sites();
  if (n < 2) return;
  // Left -> right orthogonalization (exact; truncating here is unsafe because
  // the right environment is not yet isometric).
  for (int i = 0; i + 1 < n; ++i) {
    auto& t = op.tensors[i];
    const int wl = t.wl(), wr = t.wr();
    Mat m(4 * wl, wr);  // row ((so*2+si)*wl + l)
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si)
        m.middleRows((so * 2 + si) * wl, wl) = t.w[so][si];
    Mat q, carry;
    thin_qr(m, &q, &carry);
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si)
        t.w[so][si] = q.middleRows((so * 2 + si) * wl, wl);
    auto& tn = op.tensors[i + 1];
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si) tn.w[so][si] = carry * tn.w[so][si];
  }
  // Right -> left truncation: with the left part orthogonal and the processed
  // right part isometric, the local singular spectrum is the global one.
  for (int i = n - 1; i > 0; --i) {
    auto& t = op.tensors[i];
    const int wl = t.wl(), wr = t.wr();
    Mat m(wl, 4 * wr);  // col ((so*2+si)*wr + r)
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si)
        m.middleCols((so * 2 + si) * wr, wr) = t.w[so][si];
    const SvdParts svd = robust_svd(m);
    const auto& s = svd.s;
    int k = static_cast<int>(s.size());
    const double smax = k > 0 ? s(0) : 0.0;
    while (k > 1 && s(k - 1) < rel_tol * smax) --k;
    const Mat vd = svd.v.leftCols(k).adjoint();
    const Mat carry = svd.u.leftCols(k) * s.head(k).asDiagonal();
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si)
        t.w[so][si] = vd.middleCols((so * 2 + si) * wr, wr);
    auto& tp = op.tensors[i - 1];
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si) tp.w[so][si] = tp.w[so][si] * carry;
  }
}

std::string serialize_mps(const Mps& psi) {
  std::ostringstream out;
  out << "MPS1 " << psi.n_sites() << "\n";
  for (int i = 0; i < psi.n_sites(); ++i) {
    const auto& t = psi.tensors[i];
    const int cl = t.chi_l(), cr = t.chi_r();
    out << "T " << cl << " 2 " << cr << "\n";
    for (int l = 0; l < cl; ++l)
      for (int s = 0; s < 2; ++s)
        for (int r = 0; r < cr; ++r) {
          cplx z = t.m[s](l, r);
          if (i == 0 && psi.norm != 1.0) z *= psi.norm;
          out << fmt_cplx17(z) << "\n";
        }
  }
  return out.str();
}

Mps parse_mps(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int n = 0;
  if (!(in >> magic >> n) || magic != "MPS1" || n <= 0)
    throw ParseError("MPS1: bad header");
  Mps psi;
  psi.tensors.resize(n);
  int prev_cr = 1;
  for (int i = 0; i < n; ++i) {
    std::string tag;
    int cl = 0, phys = 0, cr = 0;
    if (!(in >> tag >> cl >> phys >> cr) || tag != "T" || phys != 2 ||
        cl <= 0 || cr <= 0)
      throw ParseError("MPS1: bad tensor header at site " + std::to_string(i));
    if (cl != prev_cr)
      throw ParseError("MPS1: bond mismatch at site " + std::to_string(i));
    auto& t = psi.tensors[i];
    t.m[0] = Mat::Zero(cl, cr);
    t.m[1] = Mat::Zero(cl, cr);
    for (int l = 0; l < cl; ++l)
      for (int s = 0; s < 2; ++s)
        for (int r = 0; r < cr; ++r) {
          double re = 0.0, im = 0.0;
          if (!(in >> re >> im))
            throw ParseError("MPS1: truncated tensor data at site " +
                             std::to_string(i));
          t.m[s](l, r) = cplx(re, im);
        }
    prev_cr = cr;
  }
  if (prev_cr != 1) throw ParseError("MPS1: last bond dimension is not 1");
  std::string extra;
  if (in >> extra) throw ParseError("MPS1: trailing data");
  psi.center = -1;
  psi.norm = 1.0;
  return psi;
}

void save_mps(const Mps& psi, const std::string& path) {
  write_text_file(path, serialize_mps(psi));
}

Mps load_mps(const std::string& path) { return parse_mps(read_text_file(path)); }

}  // namespace tnprep
