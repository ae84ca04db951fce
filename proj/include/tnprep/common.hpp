#pragma once

// Shared aliases, the error taxonomy and small deterministic helpers used
// throughout the library.

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tnprep {

using cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using Vec  = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

constexpr double kPi = 3.14159265358979323846;

// ---- error taxonomy ----
// The CLI maps IoError/ParseError/ConfigError/ValidationError to exit code 2
// (bad input) and ConvergenceError/SynthesisError/FitError to exit code 1
// (numerical failure).

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };

// Carries the best approximation found when the requested tolerance was
// unreachable within the T-count budget.
struct SynthesisError : Error {
  double best_error;
  int best_t_count;
  SynthesisError(const std::string& msg, double err, int tc)
      : Error(msg), best_error(err), best_t_count(tc) {}
};

// ---- deterministic rng ----
// mt19937_64 with hand-rolled uniform/normal so that generated streams do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t raw() { return eng_(); }

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (cached pair)
  double normal() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cache_ = r * std::sin(2.0 * kPi * u2);
    have_cache_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    const int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
  }

 private:
  std::mt19937_64 eng_;
  bool have_cache_ = false;
  double cache_ = 0.0;
};

// ---- number formatting ----
// 17 significant digits round-trip IEEE doubles exactly; all text formats use
// these helpers so that repeated runs produce byte-identical files.

std::string fmt_g17(double x);
std::string fmt_cplx17(cplx z);  // "re im"

// ---- small file helpers ----
std::string read_text_file(const std::string& path);   // IoError on failure
void write_text_file(const std::string& path, const std::string& text);
void ensure_directory(const std::string& path);

}  // namespace tnprep
