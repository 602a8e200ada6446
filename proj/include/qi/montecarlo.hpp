#pragma once

// In-silico version of the detection experiment: each trial draws the
// hypothesis from the prior, draws the measurement outcome from Born-rule
// statistics and declares "present" on a Pi^(1) click.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "qi/discrimination.hpp"
#include "qi/error.hpp"
#include "qi/infotheory.hpp"
#include "qi/random.hpp"
#include "qi/scenario.hpp"

namespace qi {

inline constexpr double kZ95 = 1.959963984540054;

/// Trials are split into chunks of this size; chunk k draws from substream k,
/// so the tally does not depend on how chunks are spread over threads.
inline constexpr std::uint64_t kTrialChunk = 1u << 16;

struct ErrorEstimate {
  double errorRate = 0.0;
  std::uint64_t nErrors = 0;
  std::uint64_t nTrials = 0;
  double ciLow = 0.0;
  double ciHigh = 0.0;

  /// Half-width of the Wilson interval divided by z.
  double wilsonStandardError() const noexcept { return (ciHigh - ciLow) / (2.0 * kZ95); }

  friend bool operator==(const ErrorEstimate&, const ErrorEstimate&) = default;
};

/// Wilson score interval for k successes in n trials.
inline ErrorEstimate wilsonEstimate(std::uint64_t nErrors, std::uint64_t nTrials, double z = kZ95) {
  detail::require(nTrials >= 1, "at least one trial is required");
  detail::require(nErrors <= nTrials, "error count exceeds trial count");
  const double n = static_cast<double>(nTrials);
  const double p = static_cast<double>(nErrors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ErrorEstimate e{p, nErrors, nTrials, std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // rounding can push the bounds past p when p is exactly 0 or 1
  e.ciLow = std::min(e.ciLow, p);
  e.ciHigh = std::max(e.ciHigh, p);
  return e;
}

namespace detail {

inline std::uint64_t countErrorsInChunk(double p1, const BinaryChannel& ch, std::uint64_t trials,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const bool present = rng.uniform() < p1;
    const bool click = rng.uniform() < (present ? ch.pGivenPresent : ch.pGivenAbsent);
    errors += static_cast<std::uint64_t>(click != present);
  }
  return errors;
}

inline ErrorEstimate simulate(double p0, const BinaryChannel& ch, std::uint64_t nTrials, std::uint64_t seed,
                              unsigned threads) {
  detail::require(nTrials >= 1, "nTrials must be at least 1");
  const std::uint64_t chunks = (nTrials + kTrialChunk - 1) / kTrialChunk;
  std::vector<std::uint64_t> perChunk(chunks, 0);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t k = first; k < chunks; k += stride) {
      const std::uint64_t size = std::min(kTrialChunk, nTrials - k * kTrialChunk);
      perChunk[k] = countErrorsInChunk(1.0 - p0, ch, size, deriveSeed(seed, k));
    }
  };
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, chunks));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  std::uint64_t errors = 0;
  for (auto e : perChunk) errors += e;
  return wilsonEstimate(errors, nTrials);
}

}  // namespace detail

struct TrialConfig {
  Scenario scenario;
  TwoOutcomePovm povm;
  std::uint64_t nTrials = 100000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

inline ErrorEstimate runTrials(const TrialConfig& cfg) {
  const auto states = receivedStates(cfg.scenario);
  const auto ch = channelFromPovm(states.absent, states.present, cfg.povm);
  return detail::simulate(cfg.scenario.p0, ch, cfg.nTrials, cfg.seed, cfg.threads);
}

/// Ignores the measurement and declares the likelier hypothesis ("absent" on a tie).
inline ErrorEstimate directGuessTrials(double p0, std::uint64_t nTrials, std::uint64_t seed, unsigned threads = 1) {
  detail::requireProbability(p0, "p0");
  const bool guessAbsent = p0 >= 1.0 - p0;
  const BinaryChannel ch = guessAbsent ? BinaryChannel{0.0, 0.0} : BinaryChannel{1.0, 1.0};
  return detail::simulate(p0, ch, nTrials, seed, threads);
}

struct SweepPoint {
  double reflectivity = 0.0;
  double eta = 0.0;
  std::optional<ErrorEstimate> estimate;  // empty when nTrials == 0
  DetectionReport report;
};

/// Error curve over reflectivities. Every point simulates the illuminable-region
/// measurement, also inside forbidden regions where it loses to direct guessing.
/// Point i draws from substream deriveSeed(seed, i).
inline std::vector<SweepPoint> sweepErrorCurve(ProbeKind kind, double p0, std::span<const double> rValues,
                                               std::optional<double> wernerVisibility, std::uint64_t nTrials,
                                               std::uint64_t seed,
                                               const NoiseSpectrum& spectrum = NoiseSpectrum::uniform(2),
                                               unsigned threads = 1) {
  std::vector<SweepPoint> out;
  out.reserve(rValues.size());
  for (std::size_t i = 0; i < rValues.size(); ++i) {
    const auto s = Scenario::fromReflectivity(kind, p0, rValues[i], spectrum,
                                              kind == ProbeKind::quantum ? wernerVisibility : std::nullopt);
    SweepPoint pt{rValues[i], s.eta, std::nullopt, analyze(s)};
    if (nTrials > 0) pt.estimate = runTrials(TrialConfig{s, measurementFor(s), nTrials, deriveSeed(seed, i), threads});
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qi
