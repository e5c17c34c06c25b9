// Self-maps of the qubit state space and sampling checks of isometry
// properties with respect to D_sym, d_sym and D_z.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Geometry>

#include "qwasser/parallel.hpp"
#include "qwasser/sampling.hpp"
#include "qwasser/transport.hpp"

namespace qwasser {

// --- maps -------------------------------------------------------------------

struct UnitaryConjugation {
  Mat2 u;  // rho -> U rho U*
};

struct AntiunitaryConjugation {
  Mat2 u;  // rho -> U conj(rho) U*, conjugation in the computational basis
};

struct BlochMap {
  std::function<BlochVector(const BlochVector&)> f;
};

struct ZPhaseField {
  std::function<double(const QubitState&)> t;  // rho -> U_z(t(rho)) rho U_z(t(rho))*
};

enum class MapKind { unitary_conj, antiunitary_conj, bloch_map, z_phase_field };

/// exp(i t sigma_z)
inline Mat2 z_phase(double t) {
  Mat2 u = Mat2::Zero();
  u(0, 0) = std::polar(1.0, t);
  u(1, 1) = std::polar(1.0, -t);
  return u;
}

class StateMap {
public:
  using Payload = std::variant<UnitaryConjugation, AntiunitaryConjugation, BlochMap, ZPhaseField>;

  static StateMap unitary(const Mat2& u, std::string id = "unitary") {
    require_unitary(u, "StateMap::unitary");
    return StateMap(std::move(id), UnitaryConjugation{u});
  }
  static StateMap antiunitary(const Mat2& u, std::string id = "antiunitary") {
    require_unitary(u, "StateMap::antiunitary");
    return StateMap(std::move(id), AntiunitaryConjugation{u});
  }
  static StateMap bloch(std::function<BlochVector(const BlochVector&)> f, std::string id = "bloch_map") {
    return StateMap(std::move(id), BlochMap{std::move(f)});
  }
  static StateMap z_phase_field(std::function<double(const QubitState&)> t, std::string id = "z_phase_field") {
    return StateMap(std::move(id), ZPhaseField{std::move(t)});
  }

  const std::string& id() const { return id_; }
  const Payload& payload() const { return payload_; }
  MapKind kind() const { return static_cast<MapKind>(payload_.index()); }

private:
  StateMap(std::string id, Payload p) : id_(std::move(id)), payload_(std::move(p)) {}

  std::string id_;
  Payload payload_;
};

inline QubitState conjugated(const Mat2& u, const Mat2& m) {
  const Mat2 r = u * m * u.adjoint();
  return QubitState::from_matrix((r + r.adjoint()) / 2.0);
}

inline QubitState apply(const StateMap& map, const QubitState& rho) {
  struct Visitor {
    const QubitState& rho;
    QubitState operator()(const UnitaryConjugation& m) const { return conjugated(m.u, rho.matrix()); }
    QubitState operator()(const AntiunitaryConjugation& m) const {
      return conjugated(m.u, rho.matrix().conjugate());
    }
    QubitState operator()(const BlochMap& m) const {
      const BlochVector image = m.f(rho.bloch());
      if (image.norm() > 1.0 + kBlochClampTol) {
        throw DomainError("bloch map sends a state outside the unit ball");
      }
      return state_from_bloch(image);
    }
    QubitState operator()(const ZPhaseField& m) const { return conjugated(z_phase(m.t(rho)), rho.matrix()); }
  };
  return std::visit(Visitor{rho}, map.payload());
}

/// outer after inner. (Anti)unitary pairs stay (anti)unitary; anything else
/// becomes a Bloch-level map.
inline StateMap compose(const StateMap& outer, const StateMap& inner, std::string id = {}) {
  if (id.empty()) id = outer.id() + "*" + inner.id();
  const auto* ou = std::get_if<UnitaryConjugation>(&outer.payload());
  const auto* oa = std::get_if<AntiunitaryConjugation>(&outer.payload());
  const auto* iu = std::get_if<UnitaryConjugation>(&inner.payload());
  const auto* ia = std::get_if<AntiunitaryConjugation>(&inner.payload());
  // U conj(V conj(rho) V*) U* = (U conj(V)) rho (U conj(V))*
  if (ou && iu) return StateMap::unitary(ou->u * iu->u, id);
  if (ou && ia) return StateMap::antiunitary(ou->u * ia->u, id);
  if (oa && iu) return StateMap::antiunitary(oa->u * iu->u.conjugate(), id);
  if (oa && ia) return StateMap::unitary(oa->u * ia->u.conjugate(), id);
  return StateMap::bloch([outer, inner](const BlochVector& b) { return apply(outer, apply(inner, state_from_bloch(b))).bloch(); },
                         id);
}

// --- SU(2) -> SO(3) ------------------------------------------------------------

/// Bloch action of rho -> U rho U*: O(i,j) = tr(sigma_i U sigma_j U*) / 2.
inline Eigen::Matrix3d rotation_of_unitary(const Mat2& u) {
  Eigen::Matrix3d o;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) o(i, j) = 0.5 * (pauli(i + 1) * u * pauli(j + 1) * u.adjoint()).trace().real();
  return o;
}

/// A special unitary whose conjugation acts on Bloch vectors as the rotation
/// o: U = cos(theta/2) I - i sin(theta/2) n.sigma for the axis-angle (n, theta).
inline Mat2 rotation_to_unitary(const Eigen::Matrix3d& o) {
  if ((o.transpose() * o - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("rotation_to_unitary: matrix is not orthogonal");
  }
  if (o.determinant() < 0.0) {
    throw DomainError("rotation_to_unitary: determinant -1; factor out a reflection first");
  }
  const Eigen::AngleAxisd aa(o);
  const double half = aa.angle() / 2.0;
  const Eigen::Vector3d n = aa.axis();
  const Mat2 n_sigma = n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
  return std::cos(half) * Mat2::Identity() - Complex(0.0, std::sin(half)) * n_sigma;
}

/// The Wigner symmetry acting on Bloch vectors as o in O(3). Orientation
/// reversing o are realized as rho -> U conj(rho) U*, since entrywise
/// conjugation acts as diag(1, -1, 1).
inline StateMap wigner_map(const Eigen::Matrix3d& o, std::string id = "wigner") {
  if (o.determinant() > 0.0) return StateMap::unitary(rotation_to_unitary(o), std::move(id));
  const Eigen::Matrix3d flip = Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
  return StateMap::antiunitary(rotation_to_unitary(o * flip), std::move(id));
}

// --- metrics -----------------------------------------------------------------

enum class Metric { D_sym, D_z, d_sym };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::D_sym: return "D_sym";
    case Metric::D_z: return "D_z";
    case Metric::d_sym: return "d_sym";
  }
  return "unknown";
}

/// Squared metric value. Throws SolverAccuracyError when the solver did not
/// certify its result.
inline double metric_sq(Metric metric, const QubitState& rho, const QubitState& omega, const SolverConfig& cfg) {
  static const CostOperator c_sym = sym_cost();
  static const CostOperator c_z = z_cost();
  switch (metric) {
    case Metric::D_sym:
    case Metric::D_z: {
      const auto r = solve_min_coupling(rho, omega, metric == Metric::D_sym ? c_sym : c_z, cfg);
      if (r.status == SolverStatus::max_iterations) throw SolverAccuracyError("transport solve did not converge");
      return r.optimal_value;
    }
    case Metric::d_sym: {
      const auto d = divergence_details(rho, omega, c_sym, cfg);
      if (d.status == SolverStatus::max_iterations) throw SolverAccuracyError("transport solve did not converge");
      return d.value * d.value;
    }
  }
  throw InternalError("unknown metric");
}

// --- isometry check ------------------------------------------------------------

struct Witness {
  QubitState rho;
  QubitState omega;
  double deviation;
};

enum class Verdict { isometry_within_tol, violated };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::isometry_within_tol ? "isometry_within_tol" : "violated";
}

struct IsometryReport {
  std::string map_id;
  Metric metric;
  int samples;
  double tolerance;
  // deviations are measured on squared values: |m^2(Phi rho, Phi omega) - m^2(rho, omega)|
  double max_abs_deviation;
  Verdict verdict;
  std::optional<Witness> witness;
};

/// The pair panel: all unordered pairs (including diagonal ones) of the
/// deterministic states, then n_random stratified random pairs cycling
/// through pure/pure, pure/mixed, mixed/mixed and mixed/self.
inline std::vector<std::pair<QubitState, QubitState>> sample_pairs(int n_random, std::uint64_t seed) {
  std::vector<std::pair<QubitState, QubitState>> pairs;
  const auto panel = deterministic_panel();
  for (std::size_t i = 0; i < panel.size(); ++i)
    for (std::size_t j = i; j < panel.size(); ++j) pairs.emplace_back(panel[i], panel[j]);
  for (int k = 0; k < n_random; ++k) {
    Rng rng = sub_rng(seed, static_cast<std::uint64_t>(k));
    switch (k % 4) {
      case 0: {
        auto a = random_pure_state(rng);
        pairs.emplace_back(a, random_pure_state(rng));
        break;
      }
      case 1: {
        auto a = random_pure_state(rng);
        pairs.emplace_back(a, random_mixed_state(rng));
        break;
      }
      case 2: {
        auto a = random_mixed_state(rng);
        pairs.emplace_back(a, random_mixed_state(rng));
        break;
      }
      default: {
        auto a = random_mixed_state(rng);
        pairs.emplace_back(a, a);
        break;
      }
    }
  }
  return pairs;
}

inline IsometryReport check_isometry(const StateMap& map, Metric metric, int n_samples, double tol,
                                     std::uint64_t seed, const SolverConfig& cfg = {}) {
  if (n_samples < 1) throw DomainError("check_isometry: n_samples must be at least 1");
  const auto pairs = sample_pairs(n_samples, seed);
  std::vector<double> deviation(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [rho, omega] = pairs[i];
    try {
      const double before = metric_sq(metric, rho, omega, cfg);
      const double after = metric_sq(metric, apply(map, rho), apply(map, omega), cfg);
      deviation[i] = std::abs(after - before);
    } catch (const SolverAccuracyError& e) {
      throw SolverAccuracyError("check_isometry(" + map.id() + "): sample " + std::to_string(i) + ": " + e.what());
    }
  });

  std::size_t worst = 0;
  for (std::size_t i = 1; i < deviation.size(); ++i)
    if (deviation[i] > deviation[worst]) worst = i;
  IsometryReport report{map.id(), metric, static_cast<int>(pairs.size()), tol, deviation[worst],
                        Verdict::isometry_within_tol, std::nullopt};
  if (deviation[worst] > tol) {
    report.verdict = Verdict::violated;
    report.witness = Witness{pairs[worst].first, pairs[worst].second, deviation[worst]};
  }
  return report;
}

// --- D_z characterization -------------------------------------------------------

struct DzCondition {
  bool satisfied;
  int sign;  // +1 keeps b3, -1 negates it, 0 when undetermined
  int samples;
  double max_length_deviation;
  double max_b3_deviation;
  std::optional<QubitState> witness;
};

/// Checks that |b| is preserved and that one global sign s has
/// (b_Phi)_3 = s (b)_3 on every sample. The sign is the majority over samples
/// with |b3| > 10 tol; equatorial states do not vote.
inline DzCondition satisfies_dz_condition(const StateMap& map, int n_samples, double tol, std::uint64_t seed) {
  std::vector<QubitState> states = deterministic_panel();
  for (int k = 0; k < n_samples; ++k) {
    Rng rng = sub_rng(seed, static_cast<std::uint64_t>(k));
    states.push_back(k % 2 == 0 ? random_mixed_state(rng) : random_pure_state(rng));
  }
  std::vector<BlochVector> before, after;
  for (const auto& s : states) {
    before.push_back(s.bloch());
    after.push_back(apply(map, s).bloch());
  }

  int votes = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (std::abs(before[i].z) <= 10.0 * tol) continue;
    votes += (after[i].z * before[i].z >= 0.0) ? 1 : -1;
  }
  const int sign = votes > 0 ? 1 : (votes < 0 ? -1 : 0);
  const int s = sign == 0 ? 1 : sign;

  DzCondition out{true, sign, static_cast<int>(states.size()), 0.0, 0.0, std::nullopt};
  double worst = -1.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double dl = std::abs(after[i].norm() - before[i].norm());
    const double dz = std::abs(after[i].z - s * before[i].z);
    out.max_length_deviation = std::max(out.max_length_deviation, dl);
    out.max_b3_deviation = std::max(out.max_b3_deviation, dz);
    if (dl > tol || dz > tol) {
      out.satisfied = false;
      if (std::max(dl, dz) > worst) {
        worst = std::max(dl, dz);
        out.witness = states[i];
      }
    }
  }
  return out;
}

struct MapFamily {
  std::string name;
  std::function<StateMap(Rng&, int index)> sample;
};

struct CrosscheckEntry {
  IsometryReport isometry;
  DzCondition condition;
  bool agree;
};

struct CrosscheckSummary {
  std::string family;
  std::vector<CrosscheckEntry> entries;
  int agreements = 0;
  int disagreements = 0;
  int isometries = 0;  // maps passing the distance check
};

/// For each sampled map, both sides of the D_z characterization are
/// evaluated independently and their verdicts compared.
inline CrosscheckSummary theorem_crosscheck_dz(const MapFamily& family, int n_maps, int n_samples, double tol,
                                               std::uint64_t seed, const SolverConfig& cfg = {}) {
  CrosscheckSummary summary{family.name, {}, 0, 0, 0};
  for (int m = 0; m < n_maps; ++m) {
    Rng rng = sub_rng(seed, static_cast<std::uint64_t>(m));
    const StateMap map = family.sample(rng, m);
    const std::uint64_t map_seed = splitmix64(seed + 0x5bd1e995ULL * static_cast<std::uint64_t>(m + 1));
    auto iso = check_isometry(map, Metric::D_z, n_samples, tol, map_seed, cfg);
    auto cond = satisfies_dz_condition(map, n_samples, tol, map_seed ^ 0xa5a5a5a5ULL);
    const bool is_iso = iso.verdict == Verdict::isometry_within_tol;
    const bool agree = is_iso == cond.satisfied;
    summary.agreements += agree;
    summary.disagreements += !agree;
    summary.isometries += is_iso;
    summary.entries.push_back({std::move(iso), std::move(cond), agree});
  }
  return summary;
}

}  // namespace qwasser
