#include "qpolar/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "qpolar/bounded_transform.hpp"
#include "qpolar/complex_kernel.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/qmat_io.hpp"
#include "qpolar/slice_chi.hpp"

namespace qpolar {

// ---------------------------------------------------------------- rng

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t battery, std::uint64_t trial) {
  std::uint64_t s = mix64(seed + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (battery * 0xd1b54a32d192ed03ULL));
  s = mix64(s ^ (trial + 1) * 0x8cb92ba72f3d8dd7ULL);
  return Rng(s);
}

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

Quaternion Rng::quaternion() {
  const double w = uniform(-1.0, 1.0);
  const double x = uniform(-1.0, 1.0);
  const double y = uniform(-1.0, 1.0);
  const double z = uniform(-1.0, 1.0);
  return {w, x, y, z};
}

// ---------------------------------------------------------------- generators

namespace gen {

QMatrix general(Rng& rng, std::size_t rows, std::size_t cols) {
  QMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = rng.quaternion();
  }
  return a;
}

QVector vector(Rng& rng, std::size_t n) {
  QVector x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = rng.quaternion();
  return x;
}

QVector unit_vector(Rng& rng, std::size_t n) {
  QVector x = vector(rng, n);
  return x * (1.0 / norm(x));
}

QMatrix unitary(Rng& rng, std::size_t n) { return polar_decompose(general(rng, n, n)).u0; }

QMatrix hermitian(Rng& rng, std::size_t n) {
  const QMatrix g = general(rng, n, n);
  return g + adjoint(g);
}

QMatrix anti_self_adjoint(Rng& rng, std::size_t n) {
  const QMatrix g = general(rng, n, n);
  return g - adjoint(g);
}

QMatrix psd(Rng& rng, std::size_t n, std::size_t rank) {
  if (rank == 0) return QMatrix(n, n);
  const QMatrix b = general(rng, rank, n);
  const QMatrix p = adjoint(b) * b;
  return (p + adjoint(p)) * 0.5;
}

namespace {

QMatrix conjugated_diagonal(Rng& rng, std::vector<Quaternion> d) {
  const QMatrix w = unitary(rng, d.size());
  return w * QMatrix::diagonal(d) * adjoint(w);
}

}  // namespace

QMatrix normal(Rng& rng, std::size_t n, std::size_t zeros) {
  std::vector<Quaternion> d(n);
  for (std::size_t k = zeros; k < n; ++k) d[k] = rng.quaternion();
  return conjugated_diagonal(rng, std::move(d));
}

QMatrix hermitian_singular(Rng& rng, std::size_t n, std::size_t zeros) {
  std::vector<Quaternion> d(n);
  for (std::size_t k = zeros; k < n; ++k) d[k] = Quaternion{rng.uniform(-1.0, 1.0), 0, 0, 0};
  const QMatrix h = conjugated_diagonal(rng, std::move(d));
  return (h + adjoint(h)) * 0.5;
}

QMatrix anti_self_adjoint_singular(Rng& rng, std::size_t n, std::size_t zeros) {
  std::vector<Quaternion> d(n);
  for (std::size_t k = zeros; k < n; ++k) {
    Quaternion q = rng.quaternion();
    q.w = 0.0;
    d[k] = q;
  }
  const QMatrix h = conjugated_diagonal(rng, std::move(d));
  return (h - adjoint(h)) * 0.5;
}

QMatrix projection(Rng& rng, std::size_t n, std::size_t rank) {
  std::vector<QVector> vs;
  for (std::size_t k = 0; k < rank; ++k) vs.push_back(vector(rng, n));
  const auto basis = gram_schmidt(vs);
  const QMatrix p = projector(basis, n);
  return (p + adjoint(p)) * 0.5;
}

QMatrix rank_deficient(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  const QMatrix g = general(rng, rows, cols);
  return g * projection(rng, cols, rank);
}

QMatrix partial_isometry(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  const QMatrix a = unitary(rng, rows);
  const QMatrix b = unitary(rng, cols);
  QMatrix v(rows, cols);
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) v(r, c) += a(r, k) * conj(b(c, k));
    }
  }
  return v;
}

}  // namespace gen

// ---------------------------------------------------------------- config

void SuiteConfig::validate() const {
  if (dim < 1) throw Error(ErrorKind::InvalidConfig, "dim must be at least 1");
  if (trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorKind::InvalidConfig, "tol must be a positive finite number");
  }
  if (threads < 1) throw Error(ErrorKind::InvalidConfig, "threads must be at least 1");
}

// ---------------------------------------------------------------- trial runner

namespace {

enum class Aggregate { Max, Count };

struct CheckSpec {
  const char* name;
  double threshold;
  Aggregate agg;
};

using Residuals = std::vector<double>;
using TrialFn = std::function<void(Rng&, Residuals&)>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs cfg.trials independent trials and keeps the worst residual (or the
// number of failures) per check. Trial t always draws from the same stream
// regardless of which worker runs it.
Report run_trials(const SuiteConfig& cfg, std::uint64_t battery, const std::vector<CheckSpec>& specs,
                  const TrialFn& trial) {
  std::vector<Residuals> slots(cfg.trials);
  std::vector<std::string> errors(cfg.trials);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < cfg.trials; t = next++) {
      Rng rng = Rng::for_trial(cfg.seed, battery, t);
      Residuals res(specs.size(), 0.0);
      try {
        trial(rng, res);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
      slots[t] = std::move(res);
    }
  };

  const std::size_t workers = std::min(cfg.threads, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Report r;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    double agg = 0.0;
    for (const auto& res : slots) {
      const double v = res[k];
      if (specs[k].agg == Aggregate::Count) {
        agg += v;
      } else if (std::isnan(v) || std::isnan(agg)) {
        agg = kNaN;
      } else {
        agg = std::max(agg, v);
      }
    }
    r.add(specs[k].name, agg, specs[k].threshold);
  }
  double failed = 0.0;
  for (const auto& e : errors) failed += e.empty() ? 0.0 : 1.0;
  r.add("trial_errors", failed, 0.0);
  return r;
}

double worst(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return kNaN;
  return std::max(a, b);
}

double count_if(bool failed) { return failed ? 1.0 : 0.0; }

double scale_of(const QMatrix& a) { return std::max(1.0, operator_norm(a)); }

std::size_t draw_dim(Rng& rng, std::size_t dim) { return 1 + rng.below(dim); }

QMatrix symmetrized(const QMatrix& a) { return (a + adjoint(a)) * 0.5; }

double lambda_min(const QMatrix& h) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eig(chi(symmetrized(h))).values.back();
}

double projector_distance(std::span<const QVector> a, std::span<const QVector> b, std::size_t n) {
  return max_abs_entry(projector(a, n) - projector(b, n));
}

}  // namespace

// ---------------------------------------------------------------- chi battery

namespace {

enum ChiCheck {
  kHomAdd,
  kHomRealScale,
  kHomMul,
  kHomAdjoint,
  kNormEquality,
  kNormAdjoint,
  kPullbackRoundtrip,
  kNullDimDoubling,
  kActionIdentity,
  kEmbedIntertwines,
  kSliceOrthogonality,
  kSliceJAction,
  kCauchySchwarz,
  kClassConstructed,
  kEquivAdjoint,
  kEquivSelfAdjoint,
  kEquivPositive,
  kEquivNormal,
  kEquivUnitary,
  kEquivAntiSelfAdjoint,
  kEquivProjection,
  kEquivPartialIsometry,
};

const std::vector<CheckSpec>& chi_specs() {
  static const std::vector<CheckSpec> specs = {
      {"hom_add", 1e-11, Aggregate::Max},
      {"hom_real_scale", 1e-11, Aggregate::Max},
      {"hom_mul", 1e-11, Aggregate::Max},
      {"hom_adjoint", 1e-11, Aggregate::Max},
      {"norm_equality", 1e-9, Aggregate::Max},
      {"norm_adjoint", 1e-9, Aggregate::Max},
      {"pullback_roundtrip", 0.0, Aggregate::Max},
      {"null_dim_doubling", 0.0, Aggregate::Count},
      {"action_identity", 1e-12, Aggregate::Max},
      {"embed_intertwines", 1e-12, Aggregate::Max},
      {"slice_orthogonality", 1e-13, Aggregate::Max},
      {"slice_j_action", 1e-13, Aggregate::Max},
      {"cauchy_schwarz", 1e-12, Aggregate::Max},
      {"class_constructed", 0.0, Aggregate::Count},
      {"equiv_adjoint_compat", 0.0, Aggregate::Count},
      {"equiv_self_adjoint", 0.0, Aggregate::Count},
      {"equiv_positive", 0.0, Aggregate::Count},
      {"equiv_normal", 0.0, Aggregate::Count},
      {"equiv_unitary", 0.0, Aggregate::Count},
      {"equiv_anti_self_adjoint", 0.0, Aggregate::Count},
      {"equiv_projection", 0.0, Aggregate::Count},
      {"equiv_partial_isometry", 0.0, Aggregate::Count},
  };
  return specs;
}

// Draws an operator of the class selected by `kind` and reports whether the
// classifier recognises the planted class.
std::pair<QMatrix, bool> planted_class(Rng& rng, std::size_t n, std::size_t kind, double tol) {
  QMatrix a;
  switch (kind % 8) {
    case 0: return {gen::general(rng, n, n), true};
    case 1: a = gen::hermitian(rng, n); break;
    case 2: a = gen::psd(rng, n, rng.below(n + 1)); break;
    case 3: a = gen::unitary(rng, n); break;
    case 4: a = gen::anti_self_adjoint(rng, n); break;
    case 5: a = gen::normal(rng, n, rng.below(n + 1)); break;
    case 6: a = gen::projection(rng, n, rng.below(n + 1)); break;
    default: a = gen::partial_isometry(rng, n, n, rng.below(n + 1)); break;
  }
  const OperatorClass c = classify(a, tol);
  bool ok = false;
  switch (kind % 8) {
    case 1: ok = c.self_adjoint.value && c.normal.value; break;
    case 2: ok = c.positive.value && c.self_adjoint.value; break;
    case 3: ok = c.unitary.value && c.normal.value && c.partial_isometry.value; break;
    case 4: ok = c.anti_self_adjoint.value && c.normal.value; break;
    case 5: ok = c.normal.value; break;
    case 6: ok = c.projection.value && c.partial_isometry.value && c.positive.value; break;
    default: ok = c.partial_isometry.value; break;
  }
  return {std::move(a), ok};
}

void chi_trial(const SuiteConfig& cfg, std::size_t kind, Rng& rng, Residuals& res) {
  const std::size_t n = draw_dim(rng, cfg.dim);
  const QMatrix a = gen::general(rng, n, n);
  const QMatrix b = gen::general(rng, n, n);
  const double lambda = rng.uniform(-2.0, 2.0);
  const CMatrix ca = chi(a);
  const CMatrix cb = chi(b);

  res[kHomAdd] = max_abs_entry(chi(a + b) - (ca + cb));
  res[kHomRealScale] = max_abs_entry(chi(a * lambda) - ca * Complex(lambda, 0.0));
  res[kHomMul] = max_abs_entry(chi(a * b) - ca * cb);
  res[kHomAdjoint] = max_abs_entry(chi(adjoint(a)) - adjoint(ca));

  const double na = operator_norm(a);
  res[kNormEquality] = std::abs(na - spectral_norm(ca));
  res[kNormAdjoint] = std::abs(na - operator_norm(adjoint(a)));
  res[kPullbackRoundtrip] = max_abs_entry(chi_pullback(ca) - a);

  const std::size_t r = rng.below(n + 1);
  const QMatrix d = gen::rank_deficient(rng, n, n, r);
  const std::size_t qnull = null_range_bases(d, cfg.tol).null_basis.size();
  const std::size_t cnull = 2 * n - svd(chi(d), cfg.tol).rank;
  res[kNullDimDoubling] = count_if(qnull != n - r || cnull != 2 * qnull);

  // A x through the complex blocks: (A1 + A2 j)(x1 + x2 j)
  //   = (A1 x1 - A2 conj(x2)) + (A1 x2 + A2 conj(x1)) j.
  const QVector x = gen::vector(rng, n);
  const SliceSplit s = split_operator(a);
  std::vector<Complex> x1(n), x2(n), x1c(n), x2c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexPair p = split(x[k]);
    x1[k] = p.alpha;
    x2[k] = p.beta;
    x1c[k] = std::conj(p.alpha);
    x2c[k] = std::conj(p.beta);
  }
  const auto a1x1 = s.a1 * std::span<const Complex>(x1);
  const auto a2x2c = s.a2 * std::span<const Complex>(x2c);
  const auto a1x2 = s.a1 * std::span<const Complex>(x2);
  const auto a2x1c = s.a2 * std::span<const Complex>(x1c);
  const QVector ax = a * x;
  double action = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Quaternion want = join({a1x1[k] - a2x2c[k], a1x2[k] + a2x1c[k]});
    action = std::max(action, abs(ax[k] - want));
  }
  res[kActionIdentity] = action;

  const auto lhs = embed_vector(ax);
  const auto ex = embed_vector(x);
  const auto rhs = ca * std::span<const Complex>(ex);
  double intertwine = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) intertwine = std::max(intertwine, std::abs(lhs[k] - rhs[k]));
  res[kEmbedIntertwines] = intertwine;

  const auto [plus, minus] = slice_project(x);
  const double nx = norm(x);
  res[kSliceOrthogonality] =
      std::max(std::abs(inner(plus, minus).w), std::abs(norm(plus + minus) - nx) / std::max(1.0, nx));
  const StandardJ j{n};
  res[kSliceJAction] = std::max(norm(j.apply(plus) - plus * kI), norm(j.apply(minus) + minus * kI));

  const QVector y = gen::vector(rng, n);
  const double ny = norm(y);
  res[kCauchySchwarz] = std::max(0.0, abs(inner(x, y)) - nx * ny) / std::max(1.0, nx * ny);

  auto [c, planted] = planted_class(rng, n, kind, cfg.tol);
  res[kClassConstructed] = count_if(!planted);
  const EquivalenceReport eq = equivalence_suite(c, cfg.tol);
  for (std::size_t k = 0; k < eq.entries.size() && k < 8; ++k) {
    res[kEquivAdjoint + k] = count_if(!eq.entries[k].agree);
  }
}

}  // namespace

Report chi_battery(const SuiteConfig& cfg) {
  cfg.validate();
  // The planted class is drawn from the trial stream like everything else.
  return run_trials(cfg, 1, chi_specs(), [&](Rng& rng, Residuals& res) {
    const std::size_t kind = rng.below(8);
    chi_trial(cfg, kind, rng, res);
  });
}

// ---------------------------------------------------------------- sqrt battery

namespace {

enum SqrtCheck {
  kSpectralSquare,
  kWoukSquare,
  kWoukVsSpectral,
  kCase1Shifted,
  kCase1Strict,
  kCase1Square,
  kCommutant,
  kRootPositive,
};

const std::vector<CheckSpec>& sqrt_specs() {
  static const std::vector<CheckSpec> specs = {
      {"spectral_square", 1e-8, Aggregate::Max},
      {"wouk_square", 1e-8, Aggregate::Max},
      {"wouk_vs_spectral", 1e-7, Aggregate::Max},
      {"case1_shifted_vs_spectral", 1e-7, Aggregate::Max},
      {"case1_strict_vs_spectral", 1e-7, Aggregate::Max},
      {"case1_square", 1e-8, Aggregate::Max},
      {"commutant", 1e-8, Aggregate::Max},
      {"root_positive", 1e-10, Aggregate::Max},
  };
  return specs;
}

void sqrt_trial(const SuiteConfig& cfg, Rng& rng, Residuals& res) {
  const std::size_t n = draw_dim(rng, cfg.dim);
  const std::size_t rank = rng.below(3) == 0 ? rng.below(n + 1) : n;
  const QMatrix p = gen::psd(rng, n, rank);
  const double ps = scale_of(p);

  const QMatrix r = sqrt_positive_spectral(p, cfg.tol);
  const QMatrix w = sqrt_positive_wouk(p, cfg.tol);
  res[kSpectralSquare] = operator_norm(r * r - p) / ps;
  res[kWoukSquare] = operator_norm(w * w - p) / ps;
  res[kWoukVsSpectral] = operator_norm(w - r);

  const double shift = rng.uniform(0.1, 1.0);
  const QMatrix q = p + QMatrix::identity(n) * shift;
  const QMatrix c1 = sqrt_strictly_positive(q, 0.5 * shift, cfg.tol);
  res[kCase1Shifted] = operator_norm(c1 - sqrt_positive_spectral(q, cfg.tol));
  double square = operator_norm(c1 * c1 - q) / scale_of(q);

  const double lmin = lambda_min(p);
  if (rank == n && lmin > 1e-6 * ps) {
    const QMatrix strict = sqrt_strictly_positive(p, 0.5 * lmin, cfg.tol);
    res[kCase1Strict] = operator_norm(strict - r);
    square = std::max(square, operator_norm(strict * strict - p) / ps);
  }
  res[kCase1Square] = square;

  // B = c0 I + c1 P + c2 P^2 commutes with P, hence with sqrt(P).
  const QMatrix bc = QMatrix::identity(n) * rng.uniform(-1.0, 1.0) + p * rng.uniform(-1.0, 1.0) +
                     (p * p) * (rng.uniform(-1.0, 1.0) / ps);
  res[kCommutant] = operator_norm(bc * r - r * bc) / (scale_of(bc) * scale_of(r));

  const double rs = scale_of(r);
  res[kRootPositive] = std::max(operator_norm(r - adjoint(r)), std::max(0.0, -lambda_min(r))) / rs;
}

}  // namespace

Report sqrt_battery(const SuiteConfig& cfg) {
  cfg.validate();
  return run_trials(cfg, 2, sqrt_specs(), [&](Rng& rng, Residuals& res) { sqrt_trial(cfg, rng, res); });
}

// ---------------------------------------------------------------- polar battery

namespace {

enum PolarCheck {
  kReconstruction,
  kIdU0sU0Abs,
  kIdU0sT,
  kIdU0U0sT,
  kAbsPositive,
  kU0PartialIsometry,
  kNullRankMatch,
  kNullAnnihilation,
  kPlantedRank,
  kNativeCrosscheck,
  kModulusIsometry,
  kStructureClass,
  kNormalU0Normal,
  kNormalU0CommutesAbs,
  kNormalU0UnitaryOnRange,
  kSelfAdjointU0,
  kAntiSelfAdjointU0,
  kUnitaryExtension,
};

const std::vector<CheckSpec>& polar_specs() {
  static const std::vector<CheckSpec> specs = {
      {"reconstruction", 1e-9, Aggregate::Max},
      {"identity_u0s_u0_abs", 1e-9, Aggregate::Max},
      {"identity_u0s_t", 1e-9, Aggregate::Max},
      {"identity_u0_u0s_t", 1e-9, Aggregate::Max},
      {"abs_positive", 1e-9, Aggregate::Max},
      {"u0_partial_isometry", 1e-9, Aggregate::Max},
      {"null_rank_match", 0.0, Aggregate::Count},
      {"null_annihilation", 1e-9, Aggregate::Max},
      {"planted_rank", 0.0, Aggregate::Count},
      {"native_crosscheck", 1e-6, Aggregate::Max},
      {"modulus_isometry", 1e-9, Aggregate::Max},
      {"structure_class_detected", 0.0, Aggregate::Count},
      {"normal_u0_normal", 1e-8, Aggregate::Max},
      {"normal_u0_commutes_abs", 1e-8, Aggregate::Max},
      {"normal_u0_unitary_on_range", 1e-8, Aggregate::Max},
      {"self_adjoint_u0", 1e-8, Aggregate::Max},
      {"anti_self_adjoint_u0", 1e-8, Aggregate::Max},
      {"unitary_extension", 1e-9, Aggregate::Max},
  };
  return specs;
}

void polar_trial(const SuiteConfig& cfg, Rng& rng, Residuals& res) {
  const std::size_t kind = rng.below(6);
  const std::size_t n = draw_dim(rng, cfg.dim);
  std::size_t planted = n;
  QMatrix t;
  switch (kind) {
    case 0:
      planted = rng.below(n + 1);
      t = gen::rank_deficient(rng, n, n, planted);
      break;
    case 1: t = gen::general(rng, n, n); break;
    case 2:
      planted = n - rng.below(n + 1);
      t = gen::hermitian_singular(rng, n, n - planted);
      break;
    case 3:
      planted = n - rng.below(n + 1);
      t = gen::anti_self_adjoint_singular(rng, n, n - planted);
      break;
    case 4:
      planted = n - rng.below(n + 1);
      t = gen::normal(rng, n, n - planted);
      break;
    default:
    {
      const std::size_t m = draw_dim(rng, cfg.dim);
      planted = rng.below(std::min(m, n) + 1);
      t = gen::rank_deficient(rng, m, n, planted);
      break;
    }
  }
  const bool plant_known = kind != 1;

  const PolarFactors f = polar_decompose(t, cfg.tol);
  const Report pc = polar_checks(t, f, 1e-9, cfg.tol);
  for (const auto& c : pc.checks()) {
    if (c.name == "reconstruction") res[kReconstruction] = c.residual;
    else if (c.name == "identity_u0s_u0_abs") res[kIdU0sU0Abs] = c.residual;
    else if (c.name == "identity_u0s_t") res[kIdU0sT] = c.residual;
    else if (c.name == "identity_u0_u0s_t") res[kIdU0U0sT] = c.residual;
    else if (c.name == "abs_positive") res[kAbsPositive] = c.residual;
    else if (c.name == "u0_partial_isometry") res[kU0PartialIsometry] = c.residual;
    else if (c.name == "null_rank_match") res[kNullRankMatch] = c.pass ? 0.0 : 1.0;
    else if (c.name == "null_annihilation") res[kNullAnnihilation] = c.residual;
  }
  res[kPlantedRank] = count_if(plant_known && f.rank != planted);

  // U0 = T |T|^+ computed from the modulus alone.
  const QMatrix native = t * chi_pullback(pinv(chi(f.abs_t), cfg.tol), 1e-8);
  res[kNativeCrosscheck] = operator_norm(native - f.u0);

  const QVector x = gen::vector(rng, n);
  res[kModulusIsometry] = std::abs(norm(f.abs_t * x) - norm(t * x)) / (scale_of(t) * std::max(1.0, norm(x)));

  if (kind >= 2 && kind <= 4) {
    const OperatorClass c = classify(t, cfg.tol);
    bool detected = c.normal.value;
    if (kind == 2) detected = detected && c.self_adjoint.value;
    if (kind == 3) detected = detected && c.anti_self_adjoint.value;
    res[kStructureClass] = count_if(!detected);

    const Report sr = structure_report(t, f, 1e-8, cfg.tol);
    for (const auto& ch : sr.checks()) {
      if (ch.name == "normal_u0_normal") res[kNormalU0Normal] = ch.residual;
      else if (ch.name == "normal_u0_commutes_abs") res[kNormalU0CommutesAbs] = ch.residual;
      else if (ch.name == "normal_u0_unitary_on_range") res[kNormalU0UnitaryOnRange] = ch.residual;
      else if (ch.name == "self_adjoint_u0") res[kSelfAdjointU0] = ch.residual;
      else if (ch.name == "anti_self_adjoint_u0") res[kAntiSelfAdjointU0] = ch.residual;
    }

    if (detected) {
      const QMatrix w = unitary_extension(t, f, cfg.tol);
      const QMatrix id = QMatrix::identity(n);
      res[kUnitaryExtension] =
          std::max({operator_norm(adjoint(w) * w - id), operator_norm(w * adjoint(w) - id),
                    operator_norm(w * f.abs_t - t) / scale_of(t)});
    }
  }
}

}  // namespace

Report polar_battery(const SuiteConfig& cfg) {
  cfg.validate();
  return run_trials(cfg, 3, polar_specs(), [&](Rng& rng, Residuals& res) { polar_trial(cfg, rng, res); });
}

// ---------------------------------------------------------------- uniqueness battery

namespace {

constexpr std::size_t kPerturbationAttempts = 50;

enum UniqCheck {
  kVerdictMismatch,
  kRankMismatch,
  kWitnessMissing,
  kWitnessDistinct,
  kWitnessReconstruction,
  kWitnessPartialIsometry,
  kWitnessNull,
  kUniqueSurvives,
  kNonUniqueAccepts,
};

const std::vector<CheckSpec>& uniqueness_specs() {
  static const std::vector<CheckSpec> specs = {
      {"verdict_mismatch", 0.0, Aggregate::Count},
      {"rank_mismatch", 0.0, Aggregate::Count},
      {"witness_missing", 0.0, Aggregate::Count},
      {"witness_distinct", 0.0, Aggregate::Count},
      {"witness_reconstruction", 1e-9, Aggregate::Max},
      {"witness_partial_isometry", 1e-9, Aggregate::Max},
      {"witness_null_shrinks", 0.0, Aggregate::Count},
      {"unique_survives_perturbations", 0.0, Aggregate::Count},
      {"nonunique_accepts_admissible", 0.0, Aggregate::Count},
  };
  return specs;
}

// Rank-one V = b a* with unit a, b: a maps to b, everything orthogonal to a dies.
QMatrix rank_one(const QVector& b, const QVector& a) {
  QMatrix v(b.size(), a.size());
  for (std::size_t r = 0; r < b.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) v(r, c) = b[r] * conj(a[c]);
  }
  return v;
}

QVector combination(Rng& rng, std::span<const QVector> basis, std::size_t n) {
  QVector x(n);
  for (const auto& b : basis) x += b * rng.quaternion();
  const double nx = norm(x);
  return nx > 0.0 ? x * (1.0 / nx) : x;
}

void uniqueness_trial(const SuiteConfig& cfg, Rng& rng, Residuals& res) {
  const std::size_t m = draw_dim(rng, cfg.dim);
  const std::size_t n = draw_dim(rng, cfg.dim);
  // Half the trials plant full rank in the smaller dimension, which makes
  // the factorization unique.
  const std::size_t top = std::min(m, n);
  const std::size_t r = rng.below(2) == 0 ? top : rng.below(top + 1);
  const QMatrix t = gen::rank_deficient(rng, m, n, r);
  const bool expected_unique = (n - r == 0) || (m - r == 0);

  const UniquenessWitness w = uniqueness_witness(t, cfg.tol);
  const PolarFactors& f = w.factors;
  res[kVerdictMismatch] = count_if(f.unique != expected_unique);
  res[kRankMismatch] = count_if(f.rank != r || f.null_rank != n - r || f.corange_rank != m - r);

  if (!f.unique) {
    if (!w.u || !w.v) {
      res[kWitnessMissing] = 1.0;
      return;
    }
    const QMatrix& u = *w.u;
    res[kWitnessDistinct] = count_if(!(operator_norm(u - f.u0) > 0.5));
    res[kWitnessReconstruction] = operator_norm(u * f.abs_t - t) / scale_of(t);
    const QMatrix g = adjoint(u) * u;
    res[kWitnessPartialIsometry] = operator_norm(g * g - g);
    // U is injective on the null vectors V moves, so its null space shrinks.
    const std::size_t null_u = null_range_bases(u, cfg.tol).null_basis.size();
    res[kWitnessNull] = null_u < f.null_rank ? 0.0 : 1.0;
  }

  const NullRange nr = null_range_bases(t, cfg.tol);
  const auto corange = null_range_bases(adjoint(t), cfg.tol).null_basis;
  double survived_fail = 0.0;
  double accept_fail = 0.0;
  for (std::size_t k = 0; k < kPerturbationAttempts; ++k) {
    if (f.unique) {
      // Any nonzero rank-one candidate must be rejected: N(T) or R(T)^perp is trivial.
      const QMatrix v = rank_one(gen::unit_vector(rng, m), gen::unit_vector(rng, n));
      try {
        const QMatrix u = perturb_polar(t, f, v, cfg.tol);
        if (operator_norm(u - f.u0) > cfg.tol * 1e3) survived_fail += 1.0;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BadPerturbation) survived_fail += 1.0;
      }
    } else {
      const QVector a = combination(rng, nr.null_basis, n);
      const QVector b = combination(rng, corange, m);
      try {
        const QMatrix u = perturb_polar(t, f, rank_one(b, a), cfg.tol);
        if (operator_norm(u * f.abs_t - t) / scale_of(t) > 1e-9) accept_fail += 1.0;
      } catch (const Error&) {
        accept_fail += 1.0;
      }
    }
  }
  res[kUniqueSurvives] = survived_fail;
  res[kNonUniqueAccepts] = accept_fail;
}

}  // namespace

Report uniqueness_battery(const SuiteConfig& cfg) {
  cfg.validate();
  return run_trials(cfg, 4, uniqueness_specs(),
                    [&](Rng& rng, Residuals& res) { uniqueness_trial(cfg, rng, res); });
}

// ---------------------------------------------------------------- transform battery

namespace {

enum TransformCheck {
  kRoundtrip,
  kZNormExcess,
  kAbsIdentity,
  kAdjointCompat,
  kNullPreservation,
  kRangePreservation,
  kPolarTransport,
  kTransportReconstruction,
  kNormalPreservation,
};

const std::vector<CheckSpec>& transform_specs() {
  static const std::vector<CheckSpec> specs = {
      {"roundtrip", 1e-7, Aggregate::Max},
      {"z_norm_excess", 1e-10, Aggregate::Max},
      {"abs_identity", 1e-8, Aggregate::Max},
      {"adjoint_compat", 1e-9, Aggregate::Max},
      {"null_preservation", 1e-8, Aggregate::Max},
      {"range_preservation", 1e-8, Aggregate::Max},
      {"polar_transport", 1e-8, Aggregate::Max},
      {"transport_reconstruction", 1e-9, Aggregate::Max},
      {"normal_preservation", 1e-9, Aggregate::Max},
  };
  return specs;
}

void transform_trial(const SuiteConfig& cfg, Rng& rng, Residuals& res) {
  const std::size_t n = draw_dim(rng, cfg.dim);
  const bool normal_input = rng.below(3) == 0;
  const std::size_t m = normal_input ? n : draw_dim(rng, cfg.dim);
  QMatrix t;
  if (normal_input) {
    t = gen::normal(rng, n, rng.below(n + 1));
  } else if (rng.below(2) == 0) {
    t = gen::rank_deficient(rng, m, n, rng.below(std::min(m, n) + 1));
  } else {
    t = gen::general(rng, m, n);
  }
  const double nt = operator_norm(t);
  if (nt > 0.0) t = t * (rng.uniform(0.0, 10.0) / nt);
  const double ts = scale_of(t);

  const QMatrix z = z_transform(t, cfg.tol);
  res[kRoundtrip] = operator_norm(z_inverse(z, cfg.tol) - t) / ts;
  res[kZNormExcess] = std::max(0.0, operator_norm(z) - 1.0);

  const QMatrix shifted = QMatrix::identity(n) + adjoint(t) * t;
  const QMatrix inv_root = sqrt_positive_spectral(inverse_positive(shifted, cfg.tol), cfg.tol);
  res[kAbsIdentity] = operator_norm(modulus(z, cfg.tol) - modulus(t, cfg.tol) * inv_root);
  res[kAdjointCompat] = operator_norm(z_transform(adjoint(t), cfg.tol) - adjoint(z));

  const NullRange nrt = null_range_bases(t, cfg.tol);
  const NullRange nrz = null_range_bases(z, cfg.tol);
  double null_res = nrt.null_basis.size() == nrz.null_basis.size() ? 0.0 : 1.0;
  null_res = worst(null_res, projector_distance(nrt.null_basis, nrz.null_basis, n));
  res[kNullPreservation] = null_res;
  double range_res = nrt.range_basis.size() == nrz.range_basis.size() ? 0.0 : 1.0;
  range_res = worst(range_res, projector_distance(nrt.range_basis, nrz.range_basis, m));
  res[kRangePreservation] = range_res;

  const PolarFactors ft = polar_decompose(t, cfg.tol);
  const PolarFactors fz = polar_decompose(z, cfg.tol);
  res[kPolarTransport] = operator_norm(ft.u0 - fz.u0);
  res[kTransportReconstruction] = operator_norm(fz.u0 * ft.abs_t - t) / ts;

  if (normal_input) res[kNormalPreservation] = operator_norm(adjoint(z) * z - z * adjoint(z));
}

}  // namespace

Report transform_battery(const SuiteConfig& cfg) {
  cfg.validate();
  return run_trials(cfg, 5, transform_specs(),
                    [&](Rng& rng, Residuals& res) { transform_trial(cfg, rng, res); });
}

// ---------------------------------------------------------------- full suite

Report run_verify(const SuiteConfig& cfg) {
  cfg.validate();
  Report r;
  r.append(chi_battery(cfg), "chi.");
  r.append(sqrt_battery(cfg), "sqrt.");
  r.append(polar_battery(cfg), "polar.");
  r.append(uniqueness_battery(cfg), "uniqueness.");
  r.append(transform_battery(cfg), "transform.");
  return r;
}

std::string render_verify(const SuiteConfig& cfg, const Report& report) {
  char head[160];
  std::snprintf(head, sizeof head, "# qpolar verify dim=%zu trials=%zu seed=%llu tol=%.6e\n", cfg.dim,
                cfg.trials, static_cast<unsigned long long>(cfg.seed), cfg.tol);
  return head + report.render();
}

// ---------------------------------------------------------------- examples

namespace {

constexpr double kExampleTol = 1e-10;

std::vector<QVector> units(std::size_t n, std::initializer_list<std::size_t> idx) {
  std::vector<QVector> out;
  for (std::size_t k : idx) out.push_back(QVector::unit(n, k));
  return out;
}

// Diagonal of |A_N|: 1/sqrt2, 1/sqrt2, 0, 0, 0, then k/sqrt(k^2+1) for k >= 6.
std::vector<double> expected_modulus(std::size_t n) {
  std::vector<double> d(n, 0.0);
  d[0] = d[1] = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 6; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    d[k - 1] = kd / std::sqrt(kd * kd + 1.0);
  }
  return d;
}

QMatrix real_diagonal(const std::vector<double>& d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = Quaternion{d[k], 0, 0, 0};
  return m;
}

void bounded_checks(Report& r, std::size_t n) {
  const QMatrix a = truncated_bounded_example(n);
  const PolarFactors f = polar_decompose(a, kExampleTol);

  r.add("modulus_diagonal", max_abs_entry(f.abs_t - real_diagonal(expected_modulus(n))), kExampleTol);

  const NullRange nr = null_range_bases(a, kExampleTol);
  const auto corange = null_range_bases(adjoint(a), kExampleTol).null_basis;
  r.add_flag("null_rank_3", f.null_rank == 3 && nr.null_basis.size() == 3);
  r.add("null_space_e3_e4_e5", projector_distance(nr.null_basis, units(n, {2, 3, 4}), n), kExampleTol);
  r.add_flag("corange_rank_3", f.corange_rank == 3 && corange.size() == 3);
  r.add("corange_e1_e3_e5", projector_distance(corange, units(n, {0, 2, 4}), n), kExampleTol);
  r.add_flag("not_unique", !f.unique);

  r.add("u0_action", max_abs_entry(f.u0 - example_u0(n)), kExampleTol);
  r.add("u0_reconstruction", operator_norm(f.u0 * f.abs_t - a), kExampleTol);

  const QMatrix u = perturb_polar(a, f, example_perturbation(n), kExampleTol);
  r.add("u_reconstruction", operator_norm(u * f.abs_t - a), kExampleTol);
  const QVector e3 = QVector::unit(n, 2);
  const QVector e4 = QVector::unit(n, 3);
  r.add("u_e4_is_e3", norm(u * e4 - e3), kExampleTol);
  r.add("u0_e4_is_zero", norm(f.u0 * e4), kExampleTol);
  r.add_flag("u_differs_from_u0", operator_norm(u - f.u0) > 0.5);
  const QMatrix g = adjoint(u) * u;
  r.add("u_partial_isometry", operator_norm(g * g - g), kExampleTol);

  const double nd = static_cast<double>(n);
  r.add("operator_norm", std::abs(operator_norm(a) - nd / std::sqrt(nd * nd + 1.0)), kExampleTol);
}

void unbounded_checks(Report& r, std::size_t n) {
  const auto [s, z] = truncated_example(n, kExampleTol);
  const QMatrix a = truncated_bounded_example(n);
  r.add("z_coincides_with_a", max_abs_entry(z - a), kExampleTol);

  const PolarFactors fs = polar_decompose(s.op, kExampleTol);
  const PolarFactors fz = polar_decompose(z, kExampleTol);
  r.add("polar_transport", max_abs_entry(fz.u0 - fs.u0), 1e-8);
  r.add("u0_action", max_abs_entry(fz.u0 - example_u0(n)), kExampleTol);
  r.add("s_reconstruction", operator_norm(fs.u0 * fs.abs_t - s.op) / scale_of(s.op), kExampleTol);

  const QMatrix shifted = QMatrix::identity(n) + adjoint(s.op) * s.op;
  const QMatrix inv_root = sqrt_positive_spectral(inverse_positive(shifted));
  r.add("abs_z_identity", operator_norm(fz.abs_t - fs.abs_t * inv_root), kExampleTol);
  r.add_flag("not_unique", !fs.unique && !fz.unique && fs.null_rank == 3 && fs.corange_rank == 3);

  const QMatrix u = perturb_polar(z, fz, example_perturbation(n), kExampleTol);
  r.add("u_reconstruction_z", operator_norm(u * fz.abs_t - z), kExampleTol);
  r.add("u_reconstruction_s", operator_norm(u * fs.abs_t - s.op) / scale_of(s.op), kExampleTol);
}

}  // namespace

Report run_example(ExampleKind kind, std::size_t n) {
  if (n < 7) {
    throw Error(ErrorKind::DimensionTooSmall, "truncation needs N >= 7, got " + std::to_string(n));
  }
  Report r;
  if (kind == ExampleKind::Bounded) {
    bounded_checks(r, n);
  } else {
    unbounded_checks(r, n);
  }
  return r;
}

std::string render_example(ExampleKind kind, std::size_t n, const Report& report) {
  const char* name = kind == ExampleKind::Bounded ? "bounded" : "unbounded";
  return "# qpolar example " + std::string(name) + " n=" + std::to_string(n) + "\n" + report.render();
}

// ---------------------------------------------------------------- polar report

PolarRun run_polar(const QMatrix& t, double tol) {
  PolarRun run;
  run.factors = polar_decompose(t, tol);
  const PolarFactors& f = run.factors;
  run.report = polar_checks(t, f, 1e-9, tol);
  if (t.square()) run.report.append(structure_report(t, f, 1e-8, tol));

  char tol_text[64];
  std::snprintf(tol_text, sizeof tol_text, "%.6e", tol);
  std::string out = "# qpolar polar report\n";
  out += "rows " + std::to_string(t.rows()) + "\n";
  out += "cols " + std::to_string(t.cols()) + "\n";
  out += std::string("tol ") + tol_text + "\n";
  out += "rank " + std::to_string(f.rank) + "\n";
  out += "null_rank " + std::to_string(f.null_rank) + "\n";
  out += "corange_rank " + std::to_string(f.corange_rank) + "\n";
  out += std::string("unique ") + (f.unique ? "true" : "false") + "\n";
  out += "# U0\n" + emit_qmat(f.u0);
  out += "# absT\n" + emit_qmat(f.abs_t);
  out += run.report.render();
  run.text = std::move(out);
  return run;
}

}  // namespace qpolar
