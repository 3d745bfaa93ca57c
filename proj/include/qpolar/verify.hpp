#pragma once

// Randomized property batteries, reproduction of the weighted-shift examples
// and the polar report used by the command-line tool.

#include <cstddef>
#include <cstdint>
#include <string>

#include "qpolar/polar.hpp"
#include "qpolar/qlinalg.hpp"
#include "qpolar/report.hpp"

namespace qpolar {

// SplitMix64. Every trial owns a stream derived from (seed, battery, trial)
// so serial and parallel runs draw identical numbers.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static Rng for_trial(std::uint64_t seed, std::uint64_t battery, std::uint64_t trial);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n);
  // Entries uniform in [-1, 1]^4.
  Quaternion quaternion();

 private:
  std::uint64_t state_;
};

// Random operators per class. Entries of raw draws are uniform in [-1, 1]^4.
namespace gen {
QMatrix general(Rng& rng, std::size_t rows, std::size_t cols);
QVector vector(Rng& rng, std::size_t n);
QVector unit_vector(Rng& rng, std::size_t n);
QMatrix unitary(Rng& rng, std::size_t n);
QMatrix hermitian(Rng& rng, std::size_t n);
QMatrix anti_self_adjoint(Rng& rng, std::size_t n);
// B* B with B of shape rank x n.
QMatrix psd(Rng& rng, std::size_t n, std::size_t rank);
// W diag(d) W* with the first `zeros` diagonal entries zero.
QMatrix normal(Rng& rng, std::size_t n, std::size_t zeros);
QMatrix hermitian_singular(Rng& rng, std::size_t n, std::size_t zeros);
QMatrix anti_self_adjoint_singular(Rng& rng, std::size_t n, std::size_t zeros);
// G1 (rows x rank) * G2 (rank x cols).
QMatrix rank_deficient(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank);
QMatrix projection(Rng& rng, std::size_t n, std::size_t rank);
QMatrix partial_isometry(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank);
}  // namespace gen

struct SuiteConfig {
  std::size_t dim = 8;       // largest operator dimension drawn
  std::size_t trials = 100;  // trials per battery
  std::uint64_t seed = 42;
  double tol = kDefaultRankTol;  // rank and classification tolerance
  std::size_t threads = 1;       // does not affect the report

  // Throws Error(InvalidConfig).
  void validate() const;
};

Report chi_battery(const SuiteConfig& cfg);
Report sqrt_battery(const SuiteConfig& cfg);
Report polar_battery(const SuiteConfig& cfg);
Report uniqueness_battery(const SuiteConfig& cfg);
Report transform_battery(const SuiteConfig& cfg);

// All batteries, check names prefixed by battery.
Report run_verify(const SuiteConfig& cfg);
std::string render_verify(const SuiteConfig& cfg, const Report& report);

enum class ExampleKind { Bounded, Unbounded };

// Throws DimensionTooSmall for n < 7.
Report run_example(ExampleKind kind, std::size_t n);
std::string render_example(ExampleKind kind, std::size_t n, const Report& report);

struct PolarRun {
  PolarFactors factors;
  Report report;
  std::string text;
};

PolarRun run_polar(const QMatrix& t, double tol = kDefaultRankTol);

}  // namespace qpolar
