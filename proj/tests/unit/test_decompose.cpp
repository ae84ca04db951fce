#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "support/oracles.hpp"
#include "tnprep/decompose.hpp"

using namespace tnprep;
using namespace tnprep::testing;

namespace {

Mat2 haar2(Rng& rng) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = cplx(rng.normal(), rng.normal());
  const Eigen::HouseholderQR<Mat2> qr(m);
  Mat2 q = qr.householderQ();
  const Mat2 rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 2; ++c) q.col(c) *= rr(c, c) / std::abs(rr(c, c));
  return q;
}

Mat4 haar4(Rng& rng) {
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = cplx(rng.normal(), rng.normal());
  const Eigen::HouseholderQR<Mat4> qr(m);
  Mat4 q = qr.householderQ();
  const Mat4 rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 4; ++c) q.col(c) *= rr(c, c) / std::abs(rr(c, c));
  return q;
}

Mat4 kron22(const Mat2& a, const Mat2& b) {
  Mat4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

Mat2 rz_mat(double t) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, -t / 2.0);
  m(1, 1) = std::polar(1.0, t / 2.0);
  return m;
}

Mat2 ry_mat(double t) {
  Mat2 m;
  m << std::cos(t / 2.0), -std::sin(t / 2.0), std::sin(t / 2.0),
      std::cos(t / 2.0);
  return m;
}

Mat4 reconstruct(const KakDecomposition& k) {
  return k.phase * kron22(k.post_a, k.post_b) * canonical_gate(k.x, k.y, k.z) *
         kron22(k.pre_a, k.pre_b);
}

bool in_weyl_chamber(const KakDecomposition& k) {
  const double q = kPi / 4.0;
  if (k.x > q + 1e-9 || k.x < k.y - 1e-9 || k.y < std::abs(k.z) - 1e-9)
    return false;
  if (k.x > q - 1e-9 && k.z < -1e-9) return false;
  return true;
}

// dense unitary of a staircase circuit straight from the gate list
Mat dense_staircase(const StaircaseCircuit& c) {
  const std::int64_t dim = std::int64_t(1) << c.n_qubits;
  Mat u(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    Vec v = Vec::Zero(dim);
    v(b) = 1.0;
    for (const auto& layer : c.layers)
      for (const auto& g : layer) apply_2q_dense(&v, g.u, g.i, g.j, c.n_qubits);
    u.col(b) = v;
  }
  return u;
}

StaircaseCircuit random_staircase(int n, int layers, std::uint64_t seed) {
  Rng rng(seed);
  StaircaseCircuit c;
  c.n_qubits = n;
  c.center_bond = (n - 1) / 2;
  const auto order = vshape_layer_order(n, c.center_bond);
  for (int l = 0; l < layers; ++l) {
    std::vector<Su4Gate> layer;
    for (const auto& [i, j] : order)
      layer.push_back(Su4Gate{l, i, j, haar4(rng)});
    c.layers.push_back(std::move(layer));
  }
  return c;
}

}  // namespace

TEST_CASE("kak handles identity and swap exactly") {
  const auto kid = kak_decompose(Mat4::Identity());
  CHECK(std::abs(kid.x) < 1e-12);
  CHECK(std::abs(kid.y) < 1e-12);
  CHECK(std::abs(kid.z) < 1e-12);
  CHECK((reconstruct(kid) - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);

  Mat4 swap = Mat4::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const auto ks = kak_decompose(swap);
  CHECK(std::abs(ks.x - kPi / 4.0) < 1e-10);
  CHECK(std::abs(ks.y - kPi / 4.0) < 1e-10);
  CHECK(std::abs(ks.z - kPi / 4.0) < 1e-10);
  CHECK((reconstruct(ks) - swap).cwiseAbs().maxCoeff() < 1e-9);

  // magic-basis spectrum oracle: eigenvalues of (B^T u B)^T (B^T u B) for the
  // det-normalized gate must match {e^{2i theta_k}} from the canonical
  // angles up to one common fourth root of unity
  Mat4 b = Mat4::Zero();
  const cplx im(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  b(0, 0) = s;
  b(0, 1) = im * s;
  b(1, 2) = im * s;
  b(1, 3) = s;
  b(2, 2) = im * s;
  b(2, 3) = -s;
  b(3, 0) = s;
  b(3, 1) = -im * s;
  const cplx det = swap.determinant();
  const cplx delta =
      std::polar(std::pow(std::abs(det), 0.25), std::arg(det) / 4.0);
  const Mat4 um = b.adjoint() * (swap / delta) * b;
  const Eigen::ComplexEigenSolver<Mat4> es(um.transpose() * um);
  std::array<cplx, 4> want = {
      std::polar(1.0, 2.0 * (ks.x - ks.y + ks.z)),
      std::polar(1.0, 2.0 * (-ks.x + ks.y + ks.z)),
      std::polar(1.0, 2.0 * (ks.x + ks.y - ks.z)),
      std::polar(1.0, 2.0 * (-ks.x - ks.y - ks.z))};
  bool matched = false;
  for (int r = 0; r < 4; ++r) {
    const cplx f = std::polar(1.0, r * kPi / 2.0);
    auto got = es.eigenvalues();
    std::array<cplx, 4> scaled;
    for (int k = 0; k < 4; ++k) scaled[k] = f * want[k];
    const auto key = [](const cplx& z) {
      return std::make_pair(std::round(z.real() * 1e8),
                            std::round(z.imag() * 1e8));
    };
    std::sort(scaled.begin(), scaled.end(),
              [&](const cplx& a, const cplx& c) { return key(a) < key(c); });
    std::array<cplx, 4> gv;
    for (int k = 0; k < 4; ++k) gv[k] = got(k);
    std::sort(gv.begin(), gv.end(),
              [&](const cplx& a, const cplx& c) { return key(a) < key(c); });
    double dev = 0.0;
    for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs(gv[k] - scaled[k]));
    if (dev < 1e-9) matched = true;
  }
  CHECK(matched);
}

TEST_CASE("random gates reconstruct inside the Weyl chamber") {
  Rng rng(7);
  for (int t = 0; t < 300; ++t) {
    const Mat4 u = haar4(rng);
    const auto k = kak_decompose(u);
    CHECK((reconstruct(k) - u).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(in_weyl_chamber(k));
  }
  Mat4 bad = Mat4::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(kak_decompose(bad), ValidationError);
}

TEST_CASE("locally equivalent gates share canonical angles") {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const Mat4 u = haar4(rng);
    const Mat4 v = kron22(haar2(rng), haar2(rng)) * u *
                   kron22(haar2(rng), haar2(rng));
    const auto ku = kak_decompose(u);
    const auto kv = kak_decompose(v);
    CHECK(std::abs(ku.x - kv.x) < 1e-9);
    CHECK(std::abs(ku.y - kv.y) < 1e-9);
    CHECK(std::abs(ku.z - kv.z) < 1e-9);
  }
}

TEST_CASE("zyz euler angles reconstruct single-qubit gates") {
  const auto aid = zyz_angles(Mat2::Identity());
  CHECK(std::abs(aid[0]) < 1e-12);
  CHECK(std::abs(aid[1]) < 1e-12);
  CHECK(std::abs(aid[2]) < 1e-12);

  const auto arz = zyz_angles(rz_mat(0.3));
  CHECK(arz[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(arz[1]) < 1e-12);
  CHECK(std::abs(arz[2]) < 1e-12);

  Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    const Mat2 u = haar2(rng);
    const auto a = zyz_angles(u);
    CHECK(a[1] >= 0.0);
    CHECK(a[1] <= kPi + 1e-12);
    const Mat2 recon = std::polar(1.0, a[3]) * rz_mat(a[0]) * ry_mat(a[1]) *
                       rz_mat(a[2]);
    CHECK((recon - u).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("canonical gate matches its exponential oracle") {
  Rng rng(31);
  const Mat4 xx = kron22(Mat2::Zero(), Mat2::Zero());
  (void)xx;
  const Mat2 px = (Mat2() << 0, 1, 1, 0).finished();
  const Mat2 py = (Mat2() << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0))
                      .finished();
  const Mat2 pz = (Mat2() << 1, 0, 0, -1).finished();
  for (int t = 0; t < 20; ++t) {
    const double x = 2.0 * rng.uniform() - 1.0;
    const double y = 2.0 * rng.uniform() - 1.0;
    const double z = 2.0 * rng.uniform() - 1.0;
    const Mat4 h = x * kron22(px, px) + y * kron22(py, py) + z * kron22(pz, pz);
    const Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    Mat4 expo = Mat4::Zero();
    for (int k = 0; k < 4; ++k)
      expo += std::polar(1.0, es.eigenvalues()(k)) * es.eigenvectors().col(k) *
              es.eigenvectors().col(k).adjoint();
    CHECK((canonical_gate(x, y, z) - expo).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("one gate lowers to at most 15 rotations and reproduces itself") {
  Rng rng(5);
  const StaircaseCircuit c = random_staircase(2, 1, 11);
  LowerReport rep;
  const RotationCircuit r = lower_circuit(c, false, 1e-10, &rep);
  CHECK(r.n_rz() <= 15);
  REQUIRE(rep.rz_per_gate.size() == 1);
  CHECK(rep.rz_per_gate[0] <= 15);
  const Mat u = rotation_circuit_unitary(r);
  CHECK((u - dense_staircase(c)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("merged lowering stays unitary-identical within the rz budget") {
  const StaircaseCircuit c = random_staircase(4, 2, 13);
  LowerReport rep_m, rep_r;
  const RotationCircuit rm = lower_circuit(c, true, 1e-10, &rep_m);
  const RotationCircuit rr = lower_circuit(c, false, 1e-10, &rep_r);
  const Mat dense = dense_staircase(c);
  CHECK((rotation_circuit_unitary(rm) - dense).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((rotation_circuit_unitary(rr) - dense).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(rm.n_rz() <= rr.n_rz());
  CHECK(rm.n_rz() <= 72);  // 9 per non-final gate, 15 per final-layer gate
  const int per_layer = static_cast<int>(c.layers[0].size());
  REQUIRE(static_cast<int>(rep_m.rz_per_gate.size()) == 2 * per_layer);
  for (int g = 0; g < per_layer; ++g) CHECK(rep_m.rz_per_gate[g] <= 9);
  for (int g = 0; g < 2 * per_layer; ++g) CHECK(rep_m.rz_per_gate[g] <= 15);
  CHECK(rep_m.merged_blocks > 0);
}

TEST_CASE("an all-identity circuit elides to zero rotations") {
  StaircaseCircuit c;
  c.n_qubits = 4;
  c.center_bond = 1;
  const auto order = vshape_layer_order(4, 1);
  for (int l = 0; l < 2; ++l) {
    std::vector<Su4Gate> layer;
    for (const auto& [i, j] : order)
      layer.push_back(Su4Gate{l, i, j, Mat4::Identity()});
    c.layers.push_back(std::move(layer));
  }
  const RotationCircuit r = lower_circuit(c, true, 1e-10, nullptr);
  CHECK(r.n_rz() == 0);
  const Mat u = rotation_circuit_unitary(r);
  CHECK((u - Mat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eliding snaps clifford angles and drops zeros") {
  RotationCircuit r;
  r.n_qubits = 1;
  r.ops.push_back(RotOp{RotOpKind::kRz, {0}, 0.0});
  r.ops.push_back(RotOp{RotOpKind::kRz, {0}, kPi / 2.0});
  r.ops.push_back(RotOp{RotOpKind::kRz, {0}, -kPi / 2.0});
  r.ops.push_back(RotOp{RotOpKind::kRz, {0}, kPi});
  r.ops.push_back(RotOp{RotOpKind::kRz, {0}, kPi / 4.0 + 1e-12});
  const RotationCircuit e = elide_trivial_rotations(r, 1e-9);
  REQUIRE(e.ops.size() == 4);
  CHECK(e.ops[0].kind == RotOpKind::kS);
  CHECK(e.ops[1].kind == RotOpKind::kSdg);
  CHECK(e.ops[2].kind == RotOpKind::kZ);
  CHECK(e.ops[3].kind == RotOpKind::kRz);
  CHECK(e.n_rz() == 1);
  const Mat ue = rotation_circuit_unitary(e);
  const Mat ur = rotation_circuit_unitary(r);
  CHECK((ue - ur).cwiseAbs().maxCoeff() < 5.0 * 1e-9);
  CHECK_THROWS_AS(elide_trivial_rotations(r, -1.0), ValidationError);
}

TEST_CASE("rotation circuits round trip through text") {
  const StaircaseCircuit c = random_staircase(3, 1, 29);
  const RotationCircuit r = lower_circuit(c, true, 1e-10, nullptr);
  const RotationCircuit back = parse_rotation_circuit(
      serialize_rotation_circuit(r));
  REQUIRE(back.ops.size() == r.ops.size());
  CHECK(back.n_qubits == r.n_qubits);
  CHECK(back.phase == r.phase);
  for (std::size_t k = 0; k < r.ops.size(); ++k) {
    CHECK(back.ops[k].kind == r.ops[k].kind);
    CHECK(back.ops[k].wires == r.ops[k].wires);
    CHECK(back.ops[k].theta == r.ops[k].theta);
  }
  CHECK_THROWS_AS(parse_rotation_circuit("MPS1 2"), ParseError);
  CHECK_THROWS_AS(parse_rotation_circuit("ROTC1 2\nH 0"), ParseError);
  CHECK_THROWS_AS(parse_rotation_circuit("ROTC1 2\nQQ 0\nPHASE 1 0"),
                  ParseError);
  CHECK_THROWS_AS(parse_rotation_circuit("ROTC1 2\nH 5\nPHASE 1 0"),
                  ParseError);
  CHECK_THROWS_AS(parse_rotation_circuit("ROTC1 2\nCX 0 0\nPHASE 1 0"),
                  ParseError);
  CHECK_THROWS_AS(parse_rotation_circuit("ROTC1 2\nPHASE 1 0\nH 0"),
                  ParseError);
}

TEST_CASE("rotation unitaries use big-endian wire order") {
  RotationCircuit r;
  r.n_qubits = 2;
  r.ops.push_back(RotOp{RotOpKind::kH, {0}, 0.0});
  const Mat u = rotation_circuit_unitary(r);
  const Mat2 h = (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  const Mat4 want = kron22(h, Mat2::Identity());
  CHECK((u - want).cwiseAbs().maxCoeff() < 1e-14);
  RotationCircuit big;
  big.n_qubits = 12;
  CHECK_THROWS_AS(rotation_circuit_unitary(big), ValidationError);
}
