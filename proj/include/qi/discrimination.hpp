#pragma once

// Binary state discrimination: the Helstrom operator, optimal measurements,
// error probabilities and the forbidden/illuminable region classification.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qi/error.hpp"
#include "qi/qmat.hpp"
#include "qi/scenario.hpp"

namespace qi {

/// Eigenvalues of the Helstrom operator with |lambda| <= this are treated as zero.
inline constexpr double kSignTol = 1e-12;

/// Two-outcome measurement {Pi^(0) (declare absent), Pi^(1) (declare present)}.
class TwoOutcomePovm {
 public:
  TwoOutcomePovm(HermitianMatrix piAbsent, HermitianMatrix piPresent)
      : absent_(std::move(piAbsent)), present_(std::move(piPresent)) {
    detail::require(absent_.dim() == present_.dim(), "POVM elements have different dimensions");
    const auto sum = absent_.matrix() + present_.matrix() - ComplexMatrix::identity(absent_.dim());
    detail::require(sum.maxAbs() <= kPsdTol, "POVM elements do not sum to identity");
    detail::require(eigenHermitian(absent_).eigenvalues.front() >= -kPsdTol, "Pi^(0) is not positive semidefinite");
    detail::require(eigenHermitian(present_).eigenvalues.front() >= -kPsdTol, "Pi^(1) is not positive semidefinite");
  }

  /// Builds {I - Pi, Pi} from the "present" element.
  static TwoOutcomePovm fromPresent(const ComplexMatrix& piPresent) {
    return TwoOutcomePovm(HermitianMatrix(ComplexMatrix::identity(piPresent.dim()) - piPresent),
                          HermitianMatrix(piPresent));
  }

  const HermitianMatrix& piAbsent() const noexcept { return absent_; }
  const HermitianMatrix& piPresent() const noexcept { return present_; }
  std::size_t dim() const noexcept { return absent_.dim(); }

 private:
  HermitianMatrix absent_;
  HermitianMatrix present_;
};

enum class Region { I, II, III };
enum class DirectGuess { guessPresent, guessAbsent, measure };

inline std::string_view toString(Region r) noexcept {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

inline std::string_view toString(DirectGuess g) noexcept {
  switch (g) {
    case DirectGuess::guessPresent: return "guess-present";
    case DirectGuess::guessAbsent: return "guess-absent";
    case DirectGuess::measure: return "measure";
  }
  return "?";
}

/// Region I: forbidden, guessing "present" is optimal (p0 < p1).
/// Region II: forbidden, guessing "absent" is optimal (p0 >= p1).
/// Region III: illuminable, a nontrivial measurement is required.
struct RegionLabel {
  Region region;
  DirectGuess directGuess;

  bool forbidden() const noexcept { return region != Region::III; }
  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

namespace detail {

inline RegionLabel forbiddenLabel(double p0) {
  // The Helstrom operator has trace p0 - p1; with a single sign it must share
  // the sign of that trace, so the likelier hypothesis decides the label.
  return p0 < 1.0 - p0 ? RegionLabel{Region::I, DirectGuess::guessPresent}
                       : RegionLabel{Region::II, DirectGuess::guessAbsent};
}

inline RegionLabel labelFromSigns(bool hasPositive, bool hasNegative, double p0) {
  if (hasPositive && hasNegative) return {Region::III, DirectGuess::measure};
  return forbiddenLabel(p0);
}

}  // namespace detail

/// Helstrom operator p0 rho0 - p1 rho1.
inline HermitianMatrix omega(double p0, const DensityMatrix& rho0, const DensityMatrix& rho1) {
  detail::requireProbability(p0, "p0");
  detail::require(rho0.dim() == rho1.dim(), "omega: state dimensions differ");
  return HermitianMatrix(p0 * rho0.matrix() - (1.0 - p0) * rho1.matrix());
}

inline double helstromError(double p0, const DensityMatrix& rho0, const DensityMatrix& rho1) {
  return 0.5 * (1.0 - traceNorm(omega(p0, rho0, rho1)));
}

/// Optimal illuminable-region measurement: project onto the conventional probe
/// |0> or onto the optimal entangled probe |psi_AB>.
inline TwoOutcomePovm optimalPovm(ProbeKind kind, const NoiseSpectrum& spectrum) {
  if (kind == ProbeKind::conventional) {
    return TwoOutcomePovm::fromPresent(ComplexMatrix::basisProjector(spectrum.dim(), 0));
  }
  const auto ket = maximallyCorrelatedKet(optimalSchmidtAmplitudes(spectrum));
  return TwoOutcomePovm::fromPresent(ComplexMatrix::outer(ket));
}

/// Pi^(0) projects onto the strictly positive eigenspace of omega; eigenvalues
/// within kSignTol of zero go to Pi^(1).
inline TwoOutcomePovm signSplitPovm(const HermitianMatrix& omegaOp) {
  const auto eig = eigenHermitian(omegaOp);
  auto positive = [](double x) { return x > kSignTol ? 1.0 : 0.0; };
  auto rest = [](double x) { return x > kSignTol ? 0.0 : 1.0; };
  return TwoOutcomePovm(HermitianMatrix(eig.reconstruct(positive)), HermitianMatrix(eig.reconstruct(rest)));
}

/// p0 tr(Pi1 rho0) + p1 tr(Pi0 rho1).
inline double povmError(double p0, const DensityMatrix& rho0, const DensityMatrix& rho1, const TwoOutcomePovm& m) {
  detail::requireProbability(p0, "p0");
  detail::require(rho0.dim() == m.dim() && rho1.dim() == m.dim(), "povmError: dimension mismatch");
  return p0 * traceInner(m.piPresent(), rho0) + (1.0 - p0) * traceInner(m.piAbsent(), rho1);
}

/// General classification from the spectrum of the Helstrom operator.
inline RegionLabel classifyBySignTest(std::span<const double> omegaEigenvalues, double p0) {
  const bool pos = std::any_of(omegaEigenvalues.begin(), omegaEigenvalues.end(), [](double x) { return x > kSignTol; });
  const bool neg = std::any_of(omegaEigenvalues.begin(), omegaEigenvalues.end(), [](double x) { return x < -kSignTol; });
  return detail::labelFromSigns(pos, neg, p0);
}

inline RegionLabel classifyBySignTest(const HermitianMatrix& omegaOp, double p0) {
  return classifyBySignTest(eigenHermitian(omegaOp).eigenvalues, p0);
}

/// Closed-form classification for uniform qubit noise with ideal probes.
/// The Helstrom operator has two distinct eigenvalues,
///   conventional: (p0 - p1(1-eta))/2 and (p0 - p1(1+eta))/2,
///   quantum:      (p0 - p1(1-eta))/4 (x3) and (p0 - p1(1+3eta))/4,
/// so the illuminable band is p1(1-eta) < p0 < p1(1+eta) resp. p1(1+3eta).
inline RegionLabel classifyRegion(ProbeKind kind, double p0, double eta) {
  detail::requireProbability(p0, "p0");
  detail::requireProbability(eta, "eta");
  const double p1 = 1.0 - p0;
  const double scale = kind == ProbeKind::conventional ? 0.5 : 0.25;
  const double upperGain = kind == ProbeKind::conventional ? 1.0 : 3.0;
  const double lower = scale * (p0 - p1 * (1.0 - eta));
  const double upper = scale * (p0 - p1 * (1.0 + upperGain * eta));
  return detail::labelFromSigns(lower > kSignTol, upper < -kSignTol, p0);
}

/// Sign-test classification for an arbitrary scenario.
inline RegionLabel classifyRegion(const Scenario& s) {
  const auto states = receivedStates(s);
  return classifyBySignTest(omega(s.p0, states.absent, states.present), s.p0);
}

/// Values of p0 bounding the illuminable band at a given eta (uniform qubit noise).
struct IlluminableBand {
  double p0Lower;  // p0 = p1(1 - eta)
  double p0Upper;  // p0 = p1(1 + eta) or p1(1 + 3 eta)
};

inline IlluminableBand illuminableBand(ProbeKind kind, double eta) {
  detail::requireProbability(eta, "eta");
  const double g = kind == ProbeKind::conventional ? 1.0 : 3.0;
  return {(1.0 - eta) / (2.0 - eta), (1.0 + g * eta) / (2.0 + g * eta)};
}

inline double regionMinimumError(const RegionLabel& label, double p0, double helstrom) {
  if (label.region == Region::III) return helstrom;
  return std::min(p0, 1.0 - p0);
}

struct DetectionReport {
  double helstromError = 0.0;
  double povmError = 0.0;  // of the illuminable-region measurement
  RegionLabel regionLabel{Region::III, DirectGuess::measure};
  std::vector<double> omegaEigenvalues;
  double regionMinimumError = 0.0;
};

/// The illuminable-region measurement used for a scenario. The entangled
/// measurement for a Werner probe is the Bell projector of the ideal probe.
inline TwoOutcomePovm measurementFor(const Scenario& s) { return optimalPovm(s.kind, s.spectrum); }

inline DetectionReport analyze(const Scenario& s) {
  const auto states = receivedStates(s);
  const auto om = omega(s.p0, states.absent, states.present);
  auto eig = eigenHermitian(om);
  double norm = 0.0;
  for (double x : eig.eigenvalues) norm += std::abs(x);

  DetectionReport r;
  r.helstromError = 0.5 * (1.0 - norm);
  r.povmError = povmError(s.p0, states.absent, states.present, measurementFor(s));
  r.regionLabel = classifyBySignTest(eig.eigenvalues, s.p0);
  r.omegaEigenvalues = std::move(eig.eigenvalues);
  r.regionMinimumError = regionMinimumError(r.regionLabel, s.p0, r.helstromError);
  return r;
}

}  // namespace qi
