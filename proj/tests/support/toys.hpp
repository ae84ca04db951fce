#pragma once

// Toy interaction builders and Haar-random unitaries for tests.

#include <cstdint>
#include <string>

#include "tnprep/common.hpp"

namespace tnprep::testing {

// 12-orbital pairing instance: a proton and a neutron j=5/2 multiplet with
// in-species pair scattering of strength g and a weak same-m proton-neutron
// number-number coupling w. Sector (2,2) has dimension 225.
std::string toy_pairing_12_text(double g = 0.9, double w = 0.5);

// Random Hermitian-closed interaction with n_orbitals orbitals (mixed
// species) and ~2*n_orbitals two-body keys.
std::string toy_random_text(int n_orbitals, std::uint64_t seed);

Mat2 haar_su2(Rng& rng);
Mat4 haar_su4(Rng& rng);

}  // namespace tnprep::testing
