#include "support/toys.hpp"

#include <array>
#include <map>
#include <sstream>

namespace tnprep::testing {

std::string toy_pairing_12_text(double g, double w) {
  std::ostringstream out;
  out << "# 12-orbital pairing toy: j=5/2 proton and neutron multiplets\n";
  // orbitals 0..5 protons (eps 1.0), 6..11 neutrons (eps 1.2); jz2 order
  // 5,-5,3,-3,1,-1 puts time-reversed partners adjacent in the file.
  const std::array<int, 6> jz2 = {5, -5, 3, -3, 1, -1};
  for (int sp = 0; sp < 2; ++sp) {
    const int tz2 = sp == 0 ? 1 : -1;
    const double eps = sp == 0 ? 1.0 : 1.2;
    for (int a = 0; a < 6; ++a)
      out << "O " << (6 * sp + a) << " " << tz2 << " 0 2 5 " << jz2[a] << " "
          << eps << "\n";
  }
  // pair scattering -g P+ P with P+ = sum_{m>0} a+_m a+_{mbar}:
  // V(m, mbar, mbar', m') = -2g  (9 keys per species)
  for (int sp = 0; sp < 2; ++sp) {
    const int base = 6 * sp;
    for (int pa = 0; pa < 3; ++pa)
      for (int pb = 0; pb < 3; ++pb)
        out << "V " << (base + 2 * pa) << " " << (base + 2 * pa + 1) << " "
            << (base + 2 * pb + 1) << " " << (base + 2 * pb) << " "
            << (-2.0 * g) << "\n";
  }
  // same-m proton-neutron coupling: w * n_{p,m} n_{n,m} per m
  for (int a = 0; a < 6; ++a)
    out << "V " << a << " " << (6 + a) << " " << (6 + a) << " " << a << " "
        << (2.0 * w) << "\n";
  return out.str();
}

std::string toy_random_text(int n_orbitals, std::uint64_t seed) {
  Rng rng(seed);
  std::ostringstream out;
  for (int i = 0; i < n_orbitals; ++i) {
    const int tz2 = (i < (n_orbitals + 1) / 2) ? 1 : -1;
    const int j2 = 2 * rng.uniform_int(3) + 1;  // 1, 3, 5
    const int jz2 = -j2 + 2 * rng.uniform_int(j2 + 1);
    const int l = rng.uniform_int(3);
    const int n = rng.uniform_int(2);
    const double eps = 0.5 + 2.0 * rng.uniform();
    out << "O " << i << " " << tz2 << " " << n << " " << l << " " << j2 << " "
        << jz2 << " " << eps << "\n";
  }
  std::map<std::array<int, 4>, double> keys;
  const int want = 2 * n_orbitals;
  int guard = 0;
  while (static_cast<int>(keys.size()) < 2 * want && ++guard < 400) {
    int i = rng.uniform_int(n_orbitals), j = rng.uniform_int(n_orbitals);
    int k = rng.uniform_int(n_orbitals), l = rng.uniform_int(n_orbitals);
    if (i == j || k == l) continue;
    const std::array<int, 4> key = {i, j, k, l};
    const std::array<int, 4> conj = {l, k, j, i};
    if (keys.count(key) || keys.count(conj)) continue;
    const double v = -2.0 + 4.0 * rng.uniform();
    keys[key] = v;
    if (conj != key) keys[conj] = v;  // Hermitian closure (real values)
  }
  for (const auto& [key, v] : keys)
    out << "V " << key[0] << " " << key[1] << " " << key[2] << " " << key[3]
        << " " << fmt_g17(v) << "\n";
  return out.str();
}

namespace {
Mat haar_unitary(Rng& rng, int n) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}
}  // namespace

Mat2 haar_su2(Rng& rng) {
  Mat u = haar_unitary(rng, 2);
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  u /= std::sqrt(det);
  return Mat2(u);
}

Mat4 haar_su4(Rng& rng) {
  Mat u = haar_unitary(rng, 4);
  const cplx det = u.determinant();
  u /= std::pow(det, 0.25);
  return Mat4(u);
}

}  // namespace tnprep::testing
