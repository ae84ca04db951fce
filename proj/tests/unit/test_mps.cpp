#include <doctest.h>

#include "support/oracles.hpp"
#include "support/toys.hpp"
#include "tnprep/mps.hpp"

using namespace tnprep;
using namespace tnprep::testing;

namespace {

Vec random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vec v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = cplx(rng.normal(), rng.normal());
  v /= v.norm();
  return v;
}

double max_abs(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("product state maps to the right basis vector") {
  const Mps psi = product_state({0, 1, 1, 0});
  const Vec v = mps_to_statevector(psi);
  REQUIRE(v.size() == 16);
  CHECK(std::abs(v(6) - 1.0) < 1e-15);  // big-endian 0110
  CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(v, mps_statevector_oracle(psi)) < 1e-15);
}

TEST_CASE("statevector round trip is exact without truncation") {
  for (int n : {2, 5, 8}) {
    const Vec v = random_state(n, 11 + n);
    const Mps psi = statevector_to_mps(v, 0, 0.0);
    CHECK(max_abs(mps_to_statevector(psi), v) < 1e-12);
    CHECK(max_abs(mps_statevector_oracle(psi), v) < 1e-12);
  }
}

TEST_CASE("canonicalize preserves the state and sets isometries") {
  const Vec v = random_state(7, 3);
  Mps psi = statevector_to_mps(v, 0, 0.0);
  psi.norm = 2.5;  // exercise norm folding
  for (int c : {0, 3, 6}) {
    canonicalize(psi, c);
    CHECK(psi.center == c);
    CHECK(psi.norm == 1.0);
    for (int i = 0; i < c; ++i) {
      const auto& t = psi.tensors[i];
      const Mat g = t.m[0].adjoint() * t.m[0] + t.m[1].adjoint() * t.m[1];
      CHECK((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <
            1e-12);
    }
    for (int i = c + 1; i < psi.n_sites(); ++i) {
      const auto& t = psi.tensors[i];
      const Mat g = t.m[0] * t.m[0].adjoint() + t.m[1] * t.m[1].adjoint();
      CHECK((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
  CHECK(max_abs(mps_to_statevector(psi), 2.5 * v) < 1e-11);
}

TEST_CASE("truncate with a single effective cut matches the Schmidt weight") {
  // 6 sites at chi_max 6: exact bonds are 2,4,8,4,2 so only the center bond
  // is cut, and the overlap identity |<cut|psi>|^2 = 1 - discarded is exact.
  const Vec v = random_state(6, 7);
  Mps psi = statevector_to_mps(v, 0, 0.0);
  Mps cut = psi;
  const double discarded = truncate(cut, 6, 0.0);
  CHECK(cut.max_bond() <= 6);
  CHECK(discarded > 1e-6);  // random states are not compressible
  // Unnormalized, the truncated state keeps norm^2 = 1 - discarded, so the
  // raw overlap is 1 - discarded; normalized it is sqrt(1 - discarded).
  CHECK(std::abs(overlap(cut, psi)) ==
        doctest::Approx(1.0 - discarded).epsilon(1e-12));
  normalize(cut);
  const double ov = std::abs(overlap(cut, psi));
  CHECK(ov * ov == doctest::Approx(1.0 - discarded).epsilon(1e-12));
}

TEST_CASE("truncate bounds bonds and reports sane discarded weight") {
  const Vec v = random_state(8, 7);
  Mps psi = statevector_to_mps(v, 0, 0.0);
  Mps cut = psi;
  const double discarded = truncate(cut, 4, 0.0);
  CHECK(cut.max_bond() <= 4);
  CHECK(discarded > 1e-6);
  CHECK(discarded < 1.0);
  const double ov = std::abs(overlap(cut, psi));
  CHECK(ov > 0.0);
  CHECK(ov < 1.0);
}

TEST_CASE("overlap matches dense inner products") {
  const Vec va = random_state(6, 21), vb = random_state(6, 22);
  const Mps a = statevector_to_mps(va, 0, 0.0);
  const Mps b = statevector_to_mps(vb, 0, 0.0);
  const cplx dense = va.adjoint() * vb;
  CHECK(std::abs(overlap(a, b) - dense) < 1e-12);
  CHECK(std::abs(overlap(a, a) - cplx(1.0)) < 1e-12);
}

TEST_CASE("expectation matches a dense quadratic form") {
  // one-term MPO: 0.7 * Z at site 1 of 3
  Mpo op;
  op.tensors.resize(3);
  for (int i = 0; i < 3; ++i)
    for (int so = 0; so < 2; ++so)
      for (int si = 0; si < 2; ++si) {
        double val = (so == si) ? 1.0 : 0.0;
        if (i == 1 && so == 1 && si == 1) val = -1.0;
        if (i == 0) val *= 0.7;
        op.tensors[i].w[so][si] = Mat::Constant(1, 1, val);
      }
  const Vec v = random_state(3, 5);
  const Mps psi = statevector_to_mps(v, 0, 0.0);
  const Mat dense = mpo_to_dense(op);
  const double expect = ((v.adjoint() * dense * v)(0, 0)).real();
  CHECK(expectation(op, psi) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("site occupations match the dense reduced values") {
  const Vec v = random_state(5, 9);
  const Mps psi = statevector_to_mps(v, 0, 0.0);
  const auto occ = site_occupations(psi);
  for (int i = 0; i < 5; ++i) {
    double dense = 0.0;
    for (Eigen::Index x = 0; x < v.size(); ++x)
      if ((x >> (4 - i)) & 1) dense += std::norm(v(x));
    CHECK(occ[i] == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("compress is at least as good as plain truncation") {
  const Vec v = random_state(8, 33);
  const Mps target = statevector_to_mps(v, 0, 0.0);
  Mps cut = target;
  truncate(cut, 3, 0.0);
  normalize(cut);
  const Mps opt = compress(target, 3, 4);
  CHECK(opt.max_bond() <= 3);
  CHECK(std::abs(overlap(opt, opt) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(overlap(opt, target)) >= std::abs(overlap(cut, target)) - 1e-12);
}

TEST_CASE("apply_gate agrees with dense simulation") {
  Rng rng(17);
  Vec v = random_state(6, 40);
  Mps psi = statevector_to_mps(v, 0, 0.0);
  for (int site : {0, 2, 4}) {
    const Mat4 g = haar_su4(rng);
    const double discarded = apply_gate(psi, g, site, 0, 0.0);
    CHECK(discarded == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psi.center == site + 1);
    apply_2q_dense(&v, g, site, site + 1, 6);
    CHECK(max_abs(mps_to_statevector(psi), v) < 1e-11);
  }
  const Mat2 g1 = haar_su2(rng);
  apply_1q(psi, g1, 3);
  apply_1q_dense(&v, g1, 3, 6);
  CHECK(max_abs(mps_to_statevector(psi), v) < 1e-11);

  Mat4 bad = Mat4::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(apply_gate(psi, bad, 0, 0, 0.0), ValidationError);
}

TEST_CASE("MPS1 serialization round-trips bytes and state") {
  const Vec v = random_state(5, 55);
  const Mps psi = statevector_to_mps(v, 4, 1e-10);
  const std::string text = serialize_mps(psi);
  const Mps back = parse_mps(text);
  CHECK(serialize_mps(back) == text);
  CHECK(std::abs(overlap(psi, back) - overlap(psi, psi)) < 1e-13);
  CHECK_THROWS_AS(parse_mps("MPS2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_mps("MPS1 1\nT 1 2 1\n0 0\n"), ParseError);
}

TEST_CASE("mpo_sum and mpo_compress preserve the dense operator") {
  // two single-term MPOs: X at site 0, Z at site 2 (3 sites)
  auto one_site = [](int n, int where, const Mat2& g) {
    Mpo op;
    op.tensors.resize(n);
    for (int i = 0; i < n; ++i)
      for (int so = 0; so < 2; ++so)
        for (int si = 0; si < 2; ++si) {
          const Mat2 m = (i == where) ? g : Mat2::Identity();
          op.tensors[i].w[so][si] = Mat::Constant(1, 1, m(so, si));
        }
    return op;
  };
  Mat2 x2 = Mat2::Zero(), z2 = Mat2::Identity();
  x2(0, 1) = x2(1, 0) = 1.0;
  z2(1, 1) = -1.0;
  const Mpo a = one_site(3, 0, x2), b = one_site(3, 2, z2);
  Mpo sum = mpo_sum(a, b);
  const Mat dense = mpo_to_dense(a) + mpo_to_dense(b);
  CHECK((mpo_to_dense(sum) - dense).cwiseAbs().maxCoeff() < 1e-13);
  Mpo many = sum;
  for (int r = 0; r < 4; ++r) many = mpo_sum(many, sum);
  CHECK(many.max_bond() == 10);
  mpo_compress(many, 1e-12);
  CHECK(many.max_bond() <= 2);
  CHECK((mpo_to_dense(many) - 5.0 * dense).cwiseAbs().maxCoeff() < 1e-11);
}
