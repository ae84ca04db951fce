#include "tnprep/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

namespace tnprep {

namespace {

const cplx kImag(0.0, 1.0);

// magic (Bell) basis; conjugation by it turns SU(2) (x) SU(2) into real
// orthogonal matrices and diagonalizes every canonical gate
const Mat4 kMagic = [] {
  const double s = 1.0 / std::sqrt(2.0);
  Mat4 b = Mat4::Zero();
  b(0, 0) = s;
  b(0, 1) = kImag * s;
  b(1, 2) = kImag * s;
  b(1, 3) = s;
  b(2, 2) = kImag * s;
  b(2, 3) = -s;
  b(3, 0) = s;
  b(3, 1) = -kImag * s;
  return b;
}();

const Mat2 kPauli[3] = {
    (Mat2() << 0, 1, 1, 0).finished(),
    (Mat2() << 0, -kImag, kImag, 0).finished(),
    (Mat2() << 1, 0, 0, -1).finished(),
};
const Mat2 kSGate = (Mat2() << 1, 0, 0, kImag).finished();
// Rx(pi/2): maps Y -> Z -> -Y under conjugation, X fixed
const Mat2 kRxHalf =
    (Mat2() << 1, -kImag, -kImag, 1).finished() / std::sqrt(2.0);

Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

double wrap_angle(double t) {
  t = std::fmod(t, 4.0 * kPi);
  while (t > kPi) t -= 2.0 * kPi;
  while (t <= -kPi) t += 2.0 * kPi;
  return t;
}

Mat2 polar_2x2(const Mat2& m) {
  const Eigen::JacobiSVD<Mat2> svd(m,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// joint Jacobi diagonalization of a commuting pair of real symmetric
// matrices; returns orthogonal o with o^T x o and o^T y o diagonal (x, y
// overwritten by their diagonalized forms). det o = +1 by construction.
Eigen::Matrix4d joint_diagonalize(Eigen::Matrix4d& x, Eigen::Matrix4d& y) {
  Eigen::Matrix4d o = Eigen::Matrix4d::Identity();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double moved = 0.0;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (const Eigen::Matrix4d* m : {&x, &y}) {
          const double a = (*m)(p, p) - (*m)(q, q);
          const double b = 2.0 * (*m)(p, q);
          g11 += a * a;
          g12 += a * b;
          g22 += b * b;
        }
        // principal eigenvector (vx, vy) of the 2x2 Gram matrix gives the
        // off-diagonal-minimizing rotation via (cos 2t, sin 2t) = (vx, -vy)
        const double half = 0.5 * (g11 - g22);
        const double rad = std::sqrt(half * half + g12 * g12);
        double vx = half + rad, vy = g12;
        const double nv = std::hypot(vx, vy);
        if (nv < 1e-300) continue;
        vx /= nv;
        vy /= nv;
        const double c = std::sqrt(0.5 * (1.0 + vx));
        const double s = -0.5 * vy / c;
        if (std::abs(s) < 1e-16) continue;
        moved = std::max(moved, std::abs(s));
        auto rotate = [&](Eigen::Matrix4d& m) {
          for (int k = 0; k < 4; ++k) {
            const double mp = m(k, p), mq = m(k, q);
            m(k, p) = c * mp - s * mq;
            m(k, q) = s * mp + c * mq;
          }
          for (int k = 0; k < 4; ++k) {
            const double mp = m(p, k), mq = m(q, k);
            m(p, k) = c * mp - s * mq;
            m(q, k) = s * mp + c * mq;
          }
        };
        rotate(x);
        rotate(y);
        for (int k = 0; k < 4; ++k) {
          const double op = o(k, p), oq = o(k, q);
          o(k, p) = c * op - s * oq;
          o(k, q) = s * op + c * oq;
        }
      }
    }
    if (moved < 1e-15) break;
  }
  return o;
}

bool factor_local(const Mat4& k, Mat2* a, Mat2* b) {
  int p = 0, q = 0;
  double best = -1.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (std::abs(k(r, c)) > best) {
        best = std::abs(k(r, c));
        p = r;
        q = c;
      }
  const int p1 = p >> 1, p2 = p & 1, q1 = q >> 1, q2 = q & 1;
  Mat2 av, bv;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      av(i, j) = k(2 * i + p2, 2 * j + q2);
      bv(i, j) = k(2 * p1 + i, 2 * q1 + j);
    }
  const cplx da = av.determinant(), db = bv.determinant();
  if (std::abs(da) < 1e-20 || std::abs(db) < 1e-20) return false;
  *a = polar_2x2(av / std::sqrt(da));
  *b = polar_2x2(bv / std::sqrt(db));
  return true;
}

struct KakWork {
  double ang[3] = {0.0, 0.0, 0.0};
  Mat2 pre_a, pre_b, post_a, post_b;
};

// ang[axis] += dir*pi/2, compensated by sigma (x) sigma on the post side
void shift(KakWork* w, int axis, int dir) {
  w->ang[axis] += dir * kPi / 2.0;
  w->post_a = w->post_a * kPauli[axis];
  w->post_b = w->post_b * kPauli[axis];
}

// flip the signs of the two angles other than `kept` via sigma_kept (x) I
void flip(KakWork* w, int kept) {
  for (int a = 0; a < 3; ++a)
    if (a != kept) w->ang[a] = -w->ang[a];
  w->pre_a = kPauli[kept] * w->pre_a;
  w->post_a = w->post_a * kPauli[kept];
}

// conjugate the canonical core by v (x) v, permuting angles a1 <-> a2
void swap_axes(KakWork* w, int a1, int a2, const Mat2& v) {
  std::swap(w->ang[a1], w->ang[a2]);
  w->pre_a = v * w->pre_a;
  w->pre_b = v * w->pre_b;
  w->post_a = w->post_a * v.adjoint();
  w->post_b = w->post_b * v.adjoint();
}

void canonicalize(KakWork* w) {
  for (int pass = 0; pass < 4; ++pass) {
    for (int a = 0; a < 3; ++a) {
      while (w->ang[a] > kPi / 4.0 + 1e-12) shift(w, a, -1);
      while (w->ang[a] < -kPi / 4.0 - 1e-12) shift(w, a, +1);
    }
    if (std::abs(w->ang[1]) > std::abs(w->ang[0])) swap_axes(w, 0, 1, kSGate);
    if (std::abs(w->ang[2]) > std::abs(w->ang[1])) swap_axes(w, 1, 2, kRxHalf);
    if (std::abs(w->ang[1]) > std::abs(w->ang[0])) swap_axes(w, 0, 1, kSGate);
    if (w->ang[0] < 0.0 && w->ang[1] < 0.0)
      flip(w, 2);
    else if (w->ang[0] < 0.0)
      flip(w, 1);
    else if (w->ang[1] < 0.0)
      flip(w, 0);
    if (w->ang[0] > kPi / 4.0 - 1e-12 && w->ang[2] < -1e-15) {
      shift(w, 0, -1);
      flip(w, 1);
    }
    const bool ok = w->ang[0] <= kPi / 4.0 + 1e-12 &&
                    w->ang[0] >= w->ang[1] - 1e-12 &&
                    w->ang[1] >= std::abs(w->ang[2]) - 1e-12;
    if (ok) break;
  }
}

std::optional<KakDecomposition> kak_once(const Mat4& u) {
  const cplx det = u.determinant();
  const cplx delta =
      std::polar(std::pow(std::abs(det), 0.25), std::arg(det) / 4.0);
  const Mat4 su = u / delta;
  const Mat4 um = kMagic.adjoint() * su * kMagic;
  const Mat4 m = um.transpose() * um;
  Eigen::Matrix4d x = m.real(), y = m.imag();
  x = 0.5 * (x + x.transpose()).eval();
  y = 0.5 * (y + y.transpose()).eval();
  const Eigen::Matrix4d o = joint_diagonalize(x, y);
  double offdiag = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j)
        offdiag = std::max(offdiag, std::hypot(x(i, j), y(i, j)));
  if (offdiag > 1e-8) return std::nullopt;

  double theta[4];
  for (int k = 0; k < 4; ++k) {
    cplx d2(x(k, k), y(k, k));
    if (std::abs(d2) < 0.5) return std::nullopt;
    theta[k] = 0.5 * std::arg(d2);
  }
  // det constraints: sum of thetas must vanish exactly for the angle solve
  double sum = theta[0] + theta[1] + theta[2] + theta[3];
  if (std::lround(sum / kPi) % 2 != 0) {
    theta[0] -= kPi;
    sum -= kPi;
  }
  theta[0] -= 2.0 * kPi * std::lround(sum / (2.0 * kPi));

  Eigen::Vector4cd dinv;
  for (int k = 0; k < 4; ++k) dinv(k) = std::polar(1.0, -theta[k]);
  const Mat4 o2c = um * o.cast<cplx>() * dinv.asDiagonal();
  if (o2c.imag().cwiseAbs().maxCoeff() > 1e-6) return std::nullopt;
  const Eigen::Matrix4d o2 = o2c.real();

  const Mat4 pre4 = kMagic * o.transpose().cast<cplx>() * kMagic.adjoint();
  const Mat4 post4 = kMagic * o2.cast<cplx>() * kMagic.adjoint();
  KakWork w;
  if (!factor_local(pre4, &w.pre_a, &w.pre_b)) return std::nullopt;
  if (!factor_local(post4, &w.post_a, &w.post_b)) return std::nullopt;
  w.ang[0] = 0.5 * (theta[0] + theta[2]);
  w.ang[1] = 0.5 * (theta[1] + theta[2]);
  w.ang[2] = 0.5 * (theta[0] + theta[1]);
  canonicalize(&w);

  KakDecomposition res;
  res.pre_a = w.pre_a;
  res.pre_b = w.pre_b;
  res.post_a = w.post_a;
  res.post_b = w.post_b;
  res.x = w.ang[0];
  res.y = w.ang[1];
  res.z = w.ang[2];
  return res;
}

}  // namespace

Mat4 canonical_gate(double x, double y, double z) {
  Eigen::Vector4cd d;
  d << std::polar(1.0, x - y + z), std::polar(1.0, -x + y + z),
      std::polar(1.0, x + y - z), std::polar(1.0, -x - y - z);
  return kMagic * d.asDiagonal() * kMagic.adjoint();
}

KakDecomposition kak_decompose(const Mat4& u) {
  if ((u.adjoint() * u - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("kak_decompose: input is not unitary");
  KakDecomposition best;
  double best_err = 1e300;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Mat4 up = u;
    if (attempt > 0) {
      // re-run on a perturbed copy when the factorization came out degenerate
      Rng rng(0x5eedu + static_cast<std::uint64_t>(attempt));
      Mat4 h;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) h(r, c) = cplx(rng.normal(), rng.normal());
      h = 0.5 * (h + h.adjoint()).eval();
      const Mat4 nudged = u + kImag * 1e-12 * (h * u);
      const Eigen::JacobiSVD<Mat4> svd(
          nudged, Eigen::ComputeFullU | Eigen::ComputeFullV);
      up = svd.matrixU() * svd.matrixV().adjoint();
    }
    const auto cand = kak_once(up);
    if (!cand) continue;
    const Mat4 recon = kron2(cand->post_a, cand->post_b) *
                       canonical_gate(cand->x, cand->y, cand->z) *
                       kron2(cand->pre_a, cand->pre_b);
    const cplx tr = (recon.adjoint() * u).trace() / 4.0;
    if (std::abs(tr) < 0.5) continue;
    KakDecomposition scored = *cand;
    scored.phase = tr / std::abs(tr);
    const double err =
        (u - scored.phase * recon).cwiseAbs().maxCoeff();
    if (err < best_err) {
      best = scored;
      best_err = err;
    }
    if (best_err < 5e-10) break;
  }
  if (best_err > 1e-9)
    throw ValidationError("kak_decompose: reconstruction failed");
  return best;
}

std::array<double, 4> zyz_angles(const Mat2& u) {
  const cplx det = u.determinant();
  double phi = 0.5 * std::arg(det);
  const Mat2 v = u * std::polar(1.0, -phi);
  const double beta = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(1, 1)));
  double alpha, gamma;
  if (std::abs(v(1, 0)) < 1e-12) {
    alpha = 2.0 * std::arg(v(1, 1));
    gamma = 0.0;
  } else if (std::abs(v(1, 1)) < 1e-12) {
    alpha = 2.0 * std::arg(v(1, 0));
    gamma = 0.0;
  } else {
    const double sum = 2.0 * std::arg(v(1, 1));
    const double dif = 2.0 * std::arg(v(1, 0));
    alpha = 0.5 * (sum + dif);
    gamma = 0.5 * (sum - dif);
  }
  // wrapping an Euler angle by 2*pi flips the SU(2) sign; fold it into phi
  for (double* t : {&alpha, &gamma}) {
    const double tw = wrap_angle(*t);
    if (std::lround((*t - tw) / (2.0 * kPi)) % 2 != 0) phi += kPi;
    *t = tw;
  }
  return {alpha, beta, gamma, wrap_angle(phi)};
}

namespace {

void emit_rz(std::vector<RotOp>* ops, int w, double t, cplx* phase, int* rz) {
  const double tw = wrap_angle(t);
  if (std::lround((t - tw) / (2.0 * kPi)) % 2 != 0) *phase = -*phase;
  ops->push_back(RotOp{RotOpKind::kRz, {w}, tw});
  ++*rz;
}

void emit_cl(std::vector<RotOp>* ops, RotOpKind k, std::vector<int> wires) {
  ops->push_back(RotOp{k, std::move(wires), 0.0});
}

// u = e^{i phi} Rz(alpha) Ry(beta) Rz(gamma); Ry = (SH) Rz (SH)^dagger
void emit_local(const Mat2& u, int w, std::vector<RotOp>* ops, cplx* phase,
                int* rz) {
  const auto ang = zyz_angles(u);
  *phase *= std::polar(1.0, ang[3]);
  emit_rz(ops, w, ang[2], phase, rz);
  if (std::abs(ang[1]) > 1e-15) {
    emit_cl(ops, RotOpKind::kSdg, {w});
    emit_cl(ops, RotOpKind::kH, {w});
    emit_rz(ops, w, ang[1], phase, rz);
    emit_cl(ops, RotOpKind::kH, {w});
    emit_cl(ops, RotOpKind::kS, {w});
  }
  emit_rz(ops, w, ang[0], phase, rz);
}

// exp(i t sigma sigma) = (V (x) V) CX Rz_j(-2t) CX (V (x) V)^dagger with
// V = I (ZZ), H (XX), SH (YY)
void emit_zz_conj(double t, int i, int j, int axis, std::vector<RotOp>* ops,
                  cplx* phase, int* rz) {
  if (std::abs(t) < 1e-15) return;
  if (axis == 0) {
    emit_cl(ops, RotOpKind::kH, {i});
    emit_cl(ops, RotOpKind::kH, {j});
  } else if (axis == 1) {
    for (int w : {i, j}) {
      emit_cl(ops, RotOpKind::kSdg, {w});
      emit_cl(ops, RotOpKind::kH, {w});
    }
  }
  emit_cl(ops, RotOpKind::kCx, {i, j});
  emit_rz(ops, j, -2.0 * t, phase, rz);
  emit_cl(ops, RotOpKind::kCx, {i, j});
  if (axis == 0) {
    emit_cl(ops, RotOpKind::kH, {i});
    emit_cl(ops, RotOpKind::kH, {j});
  } else if (axis == 1) {
    for (int w : {i, j}) {
      emit_cl(ops, RotOpKind::kH, {w});
      emit_cl(ops, RotOpKind::kS, {w});
    }
  }
}

}  // namespace

RotationCircuit lower_circuit(const StaircaseCircuit& c, bool merge,
                              double elide_tol, LowerReport* report) {
  if (c.n_qubits < 2)
    throw ValidationError("lower_circuit: need at least 2 qubits");
  RotationCircuit r;
  r.n_qubits = c.n_qubits;
  std::vector<Mat2> pending(c.n_qubits, Mat2::Identity());
  std::vector<int> last_gate(c.n_qubits, -1);
  LowerReport rep;
  int gi = 0;
  for (const auto& layer : c.layers) {
    for (const auto& g : layer) {
      if (g.i < 0 || g.j != g.i + 1 || g.j >= c.n_qubits)
        throw ValidationError("lower_circuit: gate wires out of range");
      const KakDecomposition kak = kak_decompose(g.u);
      r.phase *= kak.phase;
      int rz = 0;
      if (merge) {
        if (last_gate[g.i] >= 0) ++rep.merged_blocks;
        if (last_gate[g.j] >= 0) ++rep.merged_blocks;
        emit_local(kak.pre_a * pending[g.i], g.i, &r.ops, &r.phase, &rz);
        emit_local(kak.pre_b * pending[g.j], g.j, &r.ops, &r.phase, &rz);
      } else {
        emit_local(kak.pre_a, g.i, &r.ops, &r.phase, &rz);
        emit_local(kak.pre_b, g.j, &r.ops, &r.phase, &rz);
      }
      emit_zz_conj(kak.z, g.i, g.j, 2, &r.ops, &r.phase, &rz);
      emit_zz_conj(kak.y, g.i, g.j, 1, &r.ops, &r.phase, &rz);
      emit_zz_conj(kak.x, g.i, g.j, 0, &r.ops, &r.phase, &rz);
      if (merge) {
        pending[g.i] = kak.post_a;
        pending[g.j] = kak.post_b;
        last_gate[g.i] = last_gate[g.j] = gi;
      } else {
        emit_local(kak.post_a, g.i, &r.ops, &r.phase, &rz);
        emit_local(kak.post_b, g.j, &r.ops, &r.phase, &rz);
      }
      rep.rz_per_gate.push_back(rz);
      ++gi;
    }
  }
  if (merge) {
    for (int w = 0; w < c.n_qubits; ++w) {
      if (last_gate[w] < 0) continue;
      int rz = 0;
      emit_local(pending[w], w, &r.ops, &r.phase, &rz);
      rep.rz_per_gate[last_gate[w]] += rz;
    }
  }
  if (report) *report = rep;
  return elide_trivial_rotations(r, elide_tol);
}

RotationCircuit elide_trivial_rotations(const RotationCircuit& r,
                                        double angle_tol) {
  if (angle_tol < 0.0)
    throw ValidationError("elide_trivial_rotations: angle_tol must be >= 0");
  RotationCircuit out;
  out.n_qubits = r.n_qubits;
  out.phase = r.phase;
  for (const auto& op : r.ops) {
    if (op.kind != RotOpKind::kRz) {
      out.ops.push_back(op);
      continue;
    }
    const double t = op.theta;
    if (std::abs(t) <= angle_tol) continue;
    if (std::abs(t - kPi / 2.0) <= angle_tol) {
      out.ops.push_back(RotOp{RotOpKind::kS, op.wires, 0.0});
      out.phase *= std::polar(1.0, -kPi / 4.0);  // Rz(pi/2) = e^{-i pi/4} S
    } else if (std::abs(t + kPi / 2.0) <= angle_tol) {
      out.ops.push_back(RotOp{RotOpKind::kSdg, op.wires, 0.0});
      out.phase *= std::polar(1.0, kPi / 4.0);
    } else if (std::abs(t - kPi) <= angle_tol) {
      out.ops.push_back(RotOp{RotOpKind::kZ, op.wires, 0.0});
      out.phase *= -kImag;  // Rz(pi) = e^{-i pi/2} Z
    } else if (std::abs(t + kPi) <= angle_tol) {
      out.ops.push_back(RotOp{RotOpKind::kZ, op.wires, 0.0});
      out.phase *= kImag;
    } else {
      out.ops.push_back(op);
    }
  }
  return out;
}

Mat rotation_circuit_unitary(const RotationCircuit& c) {
  if (c.n_qubits < 1 || c.n_qubits > 10)
    throw ValidationError("rotation_circuit_unitary: need 1..10 qubits");
  const std::int64_t dim = std::int64_t(1) << c.n_qubits;
  Mat u = Mat::Identity(dim, dim);
  const auto bit = [&](int w) {
    return std::int64_t(1) << (c.n_qubits - 1 - w);
  };
  for (const auto& op : c.ops) {
    for (const int w : op.wires)
      if (w < 0 || w >= c.n_qubits)
        throw ValidationError("rotation_circuit_unitary: wire out of range");
    switch (op.kind) {
      case RotOpKind::kRz: {
        const std::int64_t m = bit(op.wires[0]);
        const cplx d0 = std::polar(1.0, -op.theta / 2.0);
        const cplx d1 = std::polar(1.0, op.theta / 2.0);
        for (std::int64_t r = 0; r < dim; ++r)
          u.row(r) *= (r & m) ? d1 : d0;
        break;
      }
      case RotOpKind::kH: {
        const std::int64_t m = bit(op.wires[0]);
        const double s = 1.0 / std::sqrt(2.0);
        for (std::int64_t r = 0; r < dim; ++r) {
          if (r & m) continue;
          const Eigen::RowVectorXcd a = u.row(r), b = u.row(r | m);
          u.row(r) = s * (a + b);
          u.row(r | m) = s * (a - b);
        }
        break;
      }
      case RotOpKind::kS:
      case RotOpKind::kSdg:
      case RotOpKind::kZ: {
        const std::int64_t m = bit(op.wires[0]);
        const cplx f = op.kind == RotOpKind::kZ
                           ? cplx(-1.0)
                           : (op.kind == RotOpKind::kS ? kImag : -kImag);
        for (std::int64_t r = 0; r < dim; ++r)
          if (r & m) u.row(r) *= f;
        break;
      }
      case RotOpKind::kX: {
        const std::int64_t m = bit(op.wires[0]);
        for (std::int64_t r = 0; r < dim; ++r)
          if (!(r & m)) u.row(r).swap(u.row(r | m));
        break;
      }
      case RotOpKind::kCx: {
        const std::int64_t mc = bit(op.wires[0]), mt = bit(op.wires[1]);
        for (std::int64_t r = 0; r < dim; ++r)
          if ((r & mc) && !(r & mt)) u.row(r).swap(u.row(r | mt));
        break;
      }
      case RotOpKind::kCz: {
        const std::int64_t ma = bit(op.wires[0]), mb = bit(op.wires[1]);
        for (std::int64_t r = 0; r < dim; ++r)
          if ((r & ma) && (r & mb)) u.row(r) *= -1.0;
        break;
      }
    }
  }
  return c.phase * u;
}

std::string serialize_rotation_circuit(const RotationCircuit& c) {
  std::string s = "ROTC1 " + std::to_string(c.n_qubits) + "\n";
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case RotOpKind::kRz:
        s += "RZ " + std::to_string(op.wires[0]) + " " + fmt_g17(op.theta);
        break;
      case RotOpKind::kH:
        s += "H " + std::to_string(op.wires[0]);
        break;
      case RotOpKind::kS:
        s += "S " + std::to_string(op.wires[0]);
        break;
      case RotOpKind::kSdg:
        s += "SDG " + std::to_string(op.wires[0]);
        break;
      case RotOpKind::kZ:
        s += "Z " + std::to_string(op.wires[0]);
        break;
      case RotOpKind::kX:
        s += "X " + std::to_string(op.wires[0]);
        break;
      case RotOpKind::kCx:
        s += "CX " + std::to_string(op.wires[0]) + " " +
             std::to_string(op.wires[1]);
        break;
      case RotOpKind::kCz:
        s += "CZ " + std::to_string(op.wires[0]) + " " +
             std::to_string(op.wires[1]);
        break;
    }
    s += "\n";
  }
  s += "PHASE " + fmt_cplx17(c.phase) + "\n";
  return s;
}

RotationCircuit parse_rotation_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "ROTC1")
    throw ParseError("rotation circuit: bad magic");
  RotationCircuit c;
  if (!(in >> c.n_qubits) || c.n_qubits < 1)
    throw ParseError("rotation circuit: bad qubit count");
  const auto read_wire = [&](int* w) {
    if (!(in >> *w) || *w < 0 || *w >= c.n_qubits)
      throw ParseError("rotation circuit: bad wire");
  };
  bool have_phase = false;
  while (in >> tok) {
    if (tok == "PHASE") {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw ParseError("rotation circuit: bad phase");
      c.phase = cplx(re, im);
      have_phase = true;
      break;
    }
    RotOp op;
    if (tok == "RZ") {
      op.kind = RotOpKind::kRz;
      int w;
      read_wire(&w);
      op.wires = {w};
      if (!(in >> op.theta) || !std::isfinite(op.theta))
        throw ParseError("rotation circuit: bad angle");
    } else if (tok == "CX" || tok == "CZ") {
      op.kind = tok == "CX" ? RotOpKind::kCx : RotOpKind::kCz;
      int a, b;
      read_wire(&a);
      read_wire(&b);
      if (a == b) throw ParseError("rotation circuit: repeated wire");
      op.wires = {a, b};
    } else {
      if (tok == "H")
        op.kind = RotOpKind::kH;
      else if (tok == "S")
        op.kind = RotOpKind::kS;
      else if (tok == "SDG")
        op.kind = RotOpKind::kSdg;
      else if (tok == "Z")
        op.kind = RotOpKind::kZ;
      else if (tok == "X")
        op.kind = RotOpKind::kX;
      else
        throw ParseError("rotation circuit: unknown op '" + tok + "'");
      int w;
      read_wire(&w);
      op.wires = {w};
    }
    c.ops.push_back(std::move(op));
  }
  if (!have_phase) throw ParseError("rotation circuit: missing PHASE");
  if (in >> tok) throw ParseError("rotation circuit: trailing tokens");
  return c;
}

void save_rotation_circuit(const RotationCircuit& c, const std::string& path) {
  write_text_file(path, serialize_rotation_circuit(c));
}

RotationCircuit load_rotation_circuit(const std::string& path) {
  return parse_rotation_circuit(read_text_file(path));
}

}  // namespace tnprep
