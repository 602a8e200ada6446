#pragma once

// Shannon mutual information between target presence and a binary
// measurement outcome, and its maximisation over two-outcome measurements.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qi/discrimination.hpp"
#include "qi/error.hpp"
#include "qi/qmat.hpp"
#include "qi/random.hpp"

namespace qi {

/// Probabilities of the "present" outcome under each hypothesis.
struct BinaryChannel {
  double pGivenAbsent = 0.0;
  double pGivenPresent = 0.0;
};

/// Binary entropy in bits, with 0 log 0 = 0.
inline double binaryEntropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// I(X;Y) = H(Y) - H(Y|X) in bits, X the hypothesis with P(absent) = p0.
inline double mutualInformation(double p0, const BinaryChannel& ch) {
  detail::requireProbability(p0, "p0");
  detail::requireProbability(ch.pGivenAbsent, "pGivenAbsent");
  detail::requireProbability(ch.pGivenPresent, "pGivenPresent");
  const double p1 = 1.0 - p0;
  const double py = p0 * ch.pGivenAbsent + p1 * ch.pGivenPresent;
  const double mi = binaryEntropy(py) - p0 * binaryEntropy(ch.pGivenAbsent) - p1 * binaryEntropy(ch.pGivenPresent);
  return std::max(0.0, mi);
}

namespace detail {
inline double clampUnit(double x) noexcept { return std::clamp(x, 0.0, 1.0); }
}  // namespace detail

/// Born-rule statistics of the Pi^(1) outcome.
inline BinaryChannel channelFromPovm(const DensityMatrix& rho0, const DensityMatrix& rho1, const TwoOutcomePovm& m) {
  detail::require(rho0.dim() == m.dim() && rho1.dim() == m.dim(), "channelFromPovm: dimension mismatch");
  return {detail::clampUnit(traceInner(m.piPresent(), rho0)), detail::clampUnit(traceInner(m.piPresent(), rho1))};
}

inline constexpr double kCommuteTol = 1e-10;

/// Orthonormal basis diagonalising two commuting Hermitian matrices, with the
/// diagonal entries of each in that basis.
struct CommonEigenbasis {
  ComplexMatrix basis;  // columns
  std::vector<double> diagA;
  std::vector<double> diagB;
};

/// Diagonalises a, then diagonalises b inside every degenerate eigenspace of a.
inline CommonEigenbasis simultaneousDiagonalize(const HermitianMatrix& a, const HermitianMatrix& b) {
  detail::require(a.dim() == b.dim(), "simultaneousDiagonalize: dimension mismatch");
  const double defect = commutator(a.matrix(), b.matrix()).maxAbs();
  if (defect > kCommuteTol) {
    throw NonCommutingStates("states do not commute (commutator max-abs " + std::to_string(defect) +
                             "); use the sampled maximisation instead");
  }
  const std::size_t d = a.dim();
  const auto eigA = eigenHermitian(a);
  ComplexMatrix basis = eigA.eigenvectors;

  constexpr double kClusterTol = 1e-9;
  std::size_t start = 0;
  while (start < d) {
    std::size_t stop = start + 1;
    while (stop < d && eigA.eigenvalues[stop] - eigA.eigenvalues[stop - 1] <= kClusterTol) ++stop;
    const std::size_t k = stop - start;
    if (k > 1) {
      // restriction of b to the cluster: V_c^dagger b V_c
      ComplexMatrix restricted(k);
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
          Complex s = 0.0;
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
              s += std::conj(basis(i, start + r)) * b(i, j) * basis(j, start + c);
          restricted(r, c) = s;
        }
      const auto inner = eigenHermitian(HermitianMatrix(restricted));
      ComplexMatrix rotated = basis;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < k; ++c) {
          Complex s = 0.0;
          for (std::size_t r = 0; r < k; ++r) s += basis(i, start + r) * inner.eigenvectors(r, c);
          rotated(i, start + c) = s;
        }
      basis = std::move(rotated);
    }
    start = stop;
  }

  CommonEigenbasis out{basis, std::vector<double>(d), std::vector<double>(d)};
  const auto ad = basis.adjoint();
  const auto da = ad * a.matrix() * basis;
  const auto db = ad * b.matrix() * basis;
  for (std::size_t i = 0; i < d; ++i) {
    out.diagA[i] = da(i, i).real();
    out.diagB[i] = db(i, i).real();
  }
  return out;
}

struct MaxMutualInfo {
  double bits = 0.0;
  std::vector<std::size_t> subset;  // basis columns spanning Pi^(1)
  ComplexMatrix basis;              // common eigenbasis the subset refers to
  BinaryChannel channel;

  /// Projector onto the maximising subset, i.e. the Pi^(1) element.
  ComplexMatrix presentProjector() const {
    ComplexMatrix p(basis.dim());
    for (std::size_t k : subset)
      for (std::size_t i = 0; i < basis.dim(); ++i)
        for (std::size_t j = 0; j < basis.dim(); ++j) p(i, j) += basis(i, k) * std::conj(basis(j, k));
    return p;
  }
};

/// Exact maximum of the mutual information over two-outcome measurements for
/// commuting states. In the common eigenbasis any measurement reduces to a
/// classical garbling diag(t), t in [0,1]^d; MI is convex in the channel, so
/// the optimum sits at a vertex t in {0,1}^d, enumerated here. Among
/// (numerically) tied subsets the smallest, then the lowest mask, wins.
inline MaxMutualInfo maxMutualInformation(double p0, const DensityMatrix& rho0, const DensityMatrix& rho1) {
  detail::requireProbability(p0, "p0");
  const auto common = simultaneousDiagonalize(rho0.hermitian(), rho1.hermitian());
  const std::size_t d = rho0.dim();
  detail::require(d <= 16, "subset enumeration is limited to dimension 16");

  constexpr double kTieTol = 1e-12;
  const std::uint32_t count = std::uint32_t{1} << d;
  std::vector<BinaryChannel> channels(count);
  std::vector<double> values(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    BinaryChannel ch;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        ch.pGivenAbsent += common.diagA[i];
        ch.pGivenPresent += common.diagB[i];
      }
    }
    ch.pGivenAbsent = detail::clampUnit(ch.pGivenAbsent);
    ch.pGivenPresent = detail::clampUnit(ch.pGivenPresent);
    channels[mask] = ch;
    values[mask] = mutualInformation(p0, ch);
  }
  const double top = *std::max_element(values.begin(), values.end());
  std::uint32_t chosen = 0;
  int chosenPop = static_cast<int>(d) + 1;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (values[mask] >= top - kTieTol && std::popcount(mask) < chosenPop) {
      chosen = mask;
      chosenPop = std::popcount(mask);
    }
  }

  MaxMutualInfo best;
  best.bits = top;
  best.basis = common.basis;
  best.channel = channels[chosen];
  for (std::size_t i = 0; i < d; ++i)
    if (chosen & (std::uint32_t{1} << i)) best.subset.push_back(i);
  return best;
}

/// Haar-random two-outcome measurement: eigenvectors of a GUE matrix with
/// arcsine-distributed weights t_i = sin^2(pi u / 2) on the Pi^(1) element.
inline TwoOutcomePovm randomTwoOutcomePovm(std::size_t d, Rng& rng) {
  ComplexMatrix g(d);
  for (std::size_t i = 0; i < d; ++i) {
    g(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex z(rng.normal(), rng.normal());
      g(i, j) = z * std::sqrt(0.5);
      g(j, i) = std::conj(g(i, j));
    }
  }
  const auto eig = eigenHermitian(HermitianMatrix(g));
  std::vector<double> weights(d);
  for (auto& w : weights) {
    const double s = std::sin(0.5 * std::numbers::pi * rng.uniform());
    w = s * s;
  }
  ComplexMatrix present(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        present(i, j) += weights[k] * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  return TwoOutcomePovm::fromPresent(present);
}

/// Best mutual information over n random two-outcome measurements. Works for
/// non-commuting pairs too; for commuting pairs it is a lower bound on
/// maxMutualInformation.
inline double sampledMaxMutualInformation(double p0, const DensityMatrix& rho0, const DensityMatrix& rho1,
                                          std::size_t n, std::uint64_t seed) {
  detail::require(n >= 1, "sample count must be at least 1");
  detail::require(rho0.dim() == rho1.dim(), "sampledMaxMutualInformation: dimension mismatch");
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto m = randomTwoOutcomePovm(rho0.dim(), rng);
    best = std::max(best, mutualInformation(p0, channelFromPovm(rho0, rho1, m)));
  }
  return best;
}

/// Mutual information of both illumination schemes at one scenario point.
struct MutualInfoReport {
  double iConventional = 0.0;
  double iQuantum = 0.0;
  double difference = 0.0;
  std::vector<std::size_t> conventionalSubset;
  std::vector<std::size_t> quantumSubset;
};

inline MutualInfoReport mutualInfoReport(double p0, double eta, const NoiseSpectrum& spectrum,
                                         std::optional<double> wernerVisibility = {}) {
  const auto conv = Scenario::fromEta(ProbeKind::conventional, p0, eta, spectrum);
  const auto quan = Scenario::fromEta(ProbeKind::quantum, p0, eta, spectrum, wernerVisibility);
  const auto sc = receivedStates(conv);
  const auto sq = receivedStates(quan);
  auto mc = maxMutualInformation(p0, sc.absent, sc.present);
  auto mq = maxMutualInformation(p0, sq.absent, sq.present);
  return {mc.bits, mq.bits, mq.bits - mc.bits, std::move(mc.subset), std::move(mq.subset)};
}

}  // namespace qi
