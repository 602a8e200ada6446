#pragma once

// Probe and channel construction for single-photon target detection. All
// operators are written in the eigenbasis of the background noise, so the
// noise state is diag(lambda_0, ..., lambda_{d-1}) with ascending lambdas.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qi/error.hpp"
#include "qi/qmat.hpp"

namespace qi {

enum class ProbeKind { conventional, quantum };

inline std::string_view toString(ProbeKind k) noexcept {
  return k == ProbeKind::conventional ? "conventional" : "quantum";
}

inline ProbeKind probeKindFromString(std::string_view s) {
  if (s == "conventional") return ProbeKind::conventional;
  if (s == "quantum") return ProbeKind::quantum;
  throw InvalidArgument("unknown probe kind '" + std::string(s) + "' (expected conventional|quantum)");
}

/// Eigenvalues of the background noise state, stored ascending. Input that
/// is not sorted is sorted; the stored order defines the basis labelling.
class NoiseSpectrum {
 public:
  explicit NoiseSpectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    detail::require(lambdas_.size() >= 2, "noise spectrum needs at least two eigenvalues");
    detail::require(lambdas_.size() <= 16, "noise spectrum dimension above 16 is not supported");
    double sum = 0.0;
    for (double l : lambdas_) {
      detail::require(std::isfinite(l) && l >= 0.0, "noise eigenvalues must be finite and nonnegative");
      sum += l;
    }
    detail::require(std::abs(sum - 1.0) <= kTraceTol, "noise eigenvalues must sum to 1, got " + std::to_string(sum));
    std::stable_sort(lambdas_.begin(), lambdas_.end());
  }

  static NoiseSpectrum uniform(std::size_t d) { return NoiseSpectrum(std::vector<double>(d, 1.0 / static_cast<double>(d))); }

  std::size_t dim() const noexcept { return lambdas_.size(); }
  std::span<const double> lambdas() const noexcept { return lambdas_; }
  double operator[](std::size_t i) const noexcept { return lambdas_[i]; }

  bool strictlyPositive() const noexcept { return lambdas_.front() > 0.0; }

  DensityMatrix state() const { return DensityMatrix(ComplexMatrix::diagonal(lambdas_)); }

 private:
  std::vector<double> lambdas_;
};

struct ProbeState {
  ProbeKind kind;
  DensityMatrix state;       // dim d (conventional) or d*d (quantum, signal (x) idler)
  std::vector<double> mus;   // Schmidt amplitudes, quantum kind only
  std::optional<double> wernerVisibility;
};

/// Mixing ratio of the target-present channel for a reflectivity R.
inline double etaFromReflectivity(double reflectivity) {
  detail::requireProbability(reflectivity, "reflectivity");
  const double r2 = reflectivity * reflectivity;
  const double t2 = (1.0 - reflectivity) * (1.0 - reflectivity);
  return r2 / (r2 + t2);
}

/// Eigenstate of the noise with the smallest eigenvalue; ties go to index 0.
inline ProbeState optimalConventionalProbe(const NoiseSpectrum& spectrum) {
  return ProbeState{ProbeKind::conventional, DensityMatrix(ComplexMatrix::basisProjector(spectrum.dim(), 0)), {}, {}};
}

/// mu_i^2 = (1/lambda_i) / sum_j (1/lambda_j).
inline std::vector<double> optimalSchmidtAmplitudes(const NoiseSpectrum& spectrum) {
  detail::require(spectrum.strictlyPositive(),
                  "optimal entangled probe needs a strictly positive noise spectrum (zero eigenvalue found)");
  double inverseSum = 0.0;
  for (double l : spectrum.lambdas()) inverseSum += 1.0 / l;
  std::vector<double> mus;
  mus.reserve(spectrum.dim());
  for (double l : spectrum.lambdas()) mus.push_back(std::sqrt(1.0 / (inverseSum * l)));
  return mus;
}

/// sum_i mu_i |i>|i>.
inline std::vector<Complex> maximallyCorrelatedKet(std::span<const double> mus) {
  const std::size_t d = mus.size();
  std::vector<Complex> ket(d * d);
  for (std::size_t i = 0; i < d; ++i) ket[i * d + i] = mus[i];
  return ket;
}

/// |Phi+> = (|00> + |11>)/sqrt(2).
inline std::vector<Complex> bellKet() {
  const double a = 1.0 / std::sqrt(2.0);
  return maximallyCorrelatedKet(std::vector<double>{a, a});
}

inline ProbeState optimalQuantumProbe(const NoiseSpectrum& spectrum) {
  auto mus = optimalSchmidtAmplitudes(spectrum);
  auto ket = maximallyCorrelatedKet(mus);
  return ProbeState{ProbeKind::quantum, DensityMatrix::pure(ket), std::move(mus), {}};
}

/// Visibility v of the isotropic state whose Bell fidelity is F = v + (1 - v)/4.
inline double wernerVisibilityFromFidelity(double fidelity) {
  detail::require(fidelity >= 0.25 && fidelity <= 1.0,
                  "Bell-state fidelity must lie in [0.25, 1], got " + std::to_string(fidelity));
  return (4.0 * fidelity - 1.0) / 3.0;
}

inline double wernerFidelity(double visibility) { return visibility + (1.0 - visibility) / 4.0; }

/// v |Phi+><Phi+| + (1 - v) I/4.
inline ProbeState wernerProbe(double visibility, std::size_t d = 2) {
  detail::requireProbability(visibility, "Werner visibility");
  detail::require(d == 2, "Werner probe is only defined for qubit pairs (d = 2)");
  const auto bell = ComplexMatrix::outer(bellKet());
  const auto mixed = ComplexMatrix::identity(4) * Complex(0.25);
  const double a = 1.0 / std::sqrt(2.0);
  return ProbeState{ProbeKind::quantum, DensityMatrix(visibility * bell + (1.0 - visibility) * mixed),
                    std::vector<double>{a, a}, visibility};
}

/// One point of the detection problem.
struct Scenario {
  ProbeKind kind = ProbeKind::quantum;
  double p0 = 0.5;                      // prior of target absence
  std::optional<double> reflectivity;   // set when eta was derived from R
  double eta = 1.0;
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
  std::optional<double> wernerVisibility;  // imperfect entangled probe

  double p1() const noexcept { return 1.0 - p0; }

  static Scenario fromReflectivity(ProbeKind kind, double p0, double reflectivity,
                                   NoiseSpectrum spectrum = NoiseSpectrum::uniform(2),
                                   std::optional<double> visibility = {}) {
    Scenario s = fromEta(kind, p0, etaFromReflectivity(reflectivity), std::move(spectrum), visibility);
    s.reflectivity = reflectivity;
    return s;
  }

  static Scenario fromEta(ProbeKind kind, double p0, double eta, NoiseSpectrum spectrum = NoiseSpectrum::uniform(2),
                          std::optional<double> visibility = {}) {
    detail::requireProbability(p0, "p0");
    detail::requireProbability(eta, "eta");
    if (visibility) {
      detail::require(kind == ProbeKind::quantum, "Werner visibility only applies to the quantum probe");
      detail::requireProbability(*visibility, "Werner visibility");
    }
    return Scenario{kind, p0, std::nullopt, eta, std::move(spectrum), visibility};
  }
};

inline ProbeState probeFor(const Scenario& s) {
  if (s.kind == ProbeKind::conventional) return optimalConventionalProbe(s.spectrum);
  if (s.wernerVisibility) return wernerProbe(*s.wernerVisibility, s.spectrum.dim());
  return optimalQuantumProbe(s.spectrum);
}

struct ReceivedStates {
  DensityMatrix absent;   // rho^(0)
  DensityMatrix present;  // rho^(1)
};

/// Target absent: noise only. Target present: eta * probe + (1 - eta) * noise,
/// with the idler marginal carried along in the entangled case.
inline ReceivedStates receivedStates(const Scenario& s, const ProbeState& probe) {
  const std::size_t d = s.spectrum.dim();
  const DensityMatrix noise = s.spectrum.state();
  if (probe.kind == ProbeKind::conventional) {
    detail::require(probe.state.dim() == d, "conventional probe dimension does not match noise spectrum");
    return {noise, DensityMatrix(s.eta * probe.state.matrix() + (1.0 - s.eta) * noise.matrix())};
  }
  detail::require(probe.state.dim() == d * d, "entangled probe dimension does not match noise spectrum");
  const DensityMatrix idler = partialTraceFirst(probe.state, d, d);
  const DensityMatrix background = tensor(noise, idler);
  return {background, DensityMatrix(s.eta * probe.state.matrix() + (1.0 - s.eta) * background.matrix())};
}

inline ReceivedStates receivedStates(const Scenario& s) { return receivedStates(s, probeFor(s)); }

}  // namespace qi
