#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "qi/discrimination.hpp"

namespace qi {
namespace {

ComplexMatrix bellProjector() { return ComplexMatrix::outer(bellKet()); }

/// p0, eta pairs of the property grid: p0 in {0.01..0.99}, eta in {0.01..1}.
template <typename F>
void forEachGridPoint(F&& f) {
  for (int i = 1; i <= 99; ++i)
    for (int j = 1; j <= 100; ++j) f(i / 100.0, j / 100.0);
}

TEST(Omega, Examples) {
  testing::Gen g(1);
  const auto rho = g.density(3);
  EXPECT_LT(omega(0.5, rho, rho).matrix().maxAbs(), 1e-15);
  const auto other = g.density(3);
  EXPECT_LT((omega(1.0, rho, other).matrix() - rho.matrix()).maxAbs(), 1e-15);
  EXPECT_NEAR(omega(0.3, rho, other).trace(), 0.3 - 0.7, 1e-12);
  EXPECT_THROW(omega(0.5, rho, g.density(2)), InvalidArgument);
}

TEST(Omega, IdealQuantumSpectrum) {
  const auto rs = receivedStates(Scenario::fromEta(ProbeKind::quantum, 0.5, 1.0));
  const auto e = eigenHermitian(omega(0.5, rs.absent, rs.present)).eigenvalues;
  const auto ref = oracle::omegaEigenvalues(0.5, rs.absent.matrix(), rs.present.matrix());
  const std::vector<double> expected{-0.375, 0.125, 0.125, 0.125};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(e[k], expected[k], 1e-12);
    EXPECT_NEAR(ref[k], expected[k], 1e-12);
  }
}

TEST(Helstrom, IndistinguishableStates) {
  testing::Gen g(2);
  const auto rho = g.density(4);
  for (double p0 : {0.0, 0.2, 0.5, 0.9}) EXPECT_NEAR(helstromError(p0, rho, rho), std::min(p0, 1 - p0), 1e-12);
}

TEST(Helstrom, PerfectReflectorEqualPriors) {
  auto err = [](ProbeKind k) {
    const auto rs = receivedStates(Scenario::fromEta(k, 0.5, 1.0));
    return helstromError(0.5, rs.absent, rs.present);
  };
  EXPECT_NEAR(err(ProbeKind::conventional), 0.25, 1e-12);
  EXPECT_NEAR(err(ProbeKind::quantum), 0.125, 1e-12);
}

TEST(OptimalPovm, Forms) {
  const auto c = optimalPovm(ProbeKind::conventional, NoiseSpectrum::uniform(2));
  EXPECT_EQ(c.piPresent().matrix(), ComplexMatrix::basisProjector(2, 0));
  const auto q = optimalPovm(ProbeKind::quantum, NoiseSpectrum::uniform(2));
  EXPECT_LT((q.piPresent().matrix() - bellProjector()).maxAbs(), 1e-15);
  EXPECT_LT((q.piAbsent().matrix() + bellProjector() - ComplexMatrix::identity(4)).maxAbs(), 1e-15);

  const auto skew = optimalPovm(ProbeKind::quantum, NoiseSpectrum({0.2, 0.8}));
  const std::vector<double> mus{std::sqrt(0.8), std::sqrt(0.2)};
  EXPECT_LT((skew.piPresent().matrix() - ComplexMatrix::outer(maximallyCorrelatedKet(mus))).maxAbs(), 1e-14);
  EXPECT_NEAR(eigenHermitian(skew.piPresent()).eigenvalues.back(), 1.0, 1e-12);  // rank one projector
  EXPECT_THROW(optimalPovm(ProbeKind::quantum, NoiseSpectrum({0.0, 1.0})), InvalidArgument);
}

TEST(Povm, RejectsInvalidElements) {
  const auto id = ComplexMatrix::identity(2);
  EXPECT_THROW(TwoOutcomePovm(HermitianMatrix(id), HermitianMatrix(id)), InvalidArgument);
  EXPECT_THROW(TwoOutcomePovm::fromPresent(2.0 * id), InvalidArgument);  // I - 2I is negative
}

TEST(SignSplit, DiagonalAndZero) {
  const auto m = signSplitPovm(HermitianMatrix(ComplexMatrix{{0.2, 0.0}, {0.0, -0.2}}));
  EXPECT_LT((m.piAbsent().matrix() - ComplexMatrix::basisProjector(2, 0)).maxAbs(), 1e-15);
  const auto z = signSplitPovm(HermitianMatrix(ComplexMatrix::zero(3)));
  EXPECT_EQ(z.piAbsent().matrix().maxAbs(), 0.0);
  EXPECT_LT((z.piPresent().matrix() - ComplexMatrix::identity(3)).maxAbs(), 1e-15);
}

TEST(SignSplit, IdealQuantumGivesBellMeasurement) {
  const auto rs = receivedStates(Scenario::fromEta(ProbeKind::quantum, 0.5, 1.0));
  const auto m = signSplitPovm(omega(0.5, rs.absent, rs.present));
  EXPECT_LT((m.piPresent().matrix() - bellProjector()).maxAbs(), 1e-12);
}

TEST(SignSplitProperty, AchievesHelstromOnRandomInstances) {
  testing::Gen g(4242);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t d = 2 + k % 3;
    const double p0 = g.uniform();
    const auto r0 = g.density(d), r1 = g.density(d);
    const double h = helstromError(p0, r0, r1);
    EXPECT_NEAR(povmError(p0, r0, r1, signSplitPovm(omega(p0, r0, r1))), h, 1e-10);
    EXPECT_NEAR(h, oracle::helstromViaEigen(p0, r0.matrix(), r1.matrix()), 1e-10);
    EXPECT_GE(h, -1e-12);
    EXPECT_LE(h, std::min(p0, 1 - p0) + 1e-10);
    // any other measurement does no better
    EXPECT_GE(povmError(p0, r0, r1, optimalPovm(ProbeKind::conventional, NoiseSpectrum::uniform(d))), h - 1e-10);
  }
}

TEST(PovmError, ClosedFormsOnGrid) {
  const auto conv = optimalPovm(ProbeKind::conventional, NoiseSpectrum::uniform(2));
  const auto quan = optimalPovm(ProbeKind::quantum, NoiseSpectrum::uniform(2));
  forEachGridPoint([&](double p0, double eta) {
    const auto c = receivedStates(Scenario::fromEta(ProbeKind::conventional, p0, eta));
    const auto q = receivedStates(Scenario::fromEta(ProbeKind::quantum, p0, eta));
    EXPECT_NEAR(povmError(p0, c.absent, c.present, conv), oracle::conventionalPovmError(p0, eta), 1e-12);
    EXPECT_NEAR(povmError(p0, q.absent, q.present, quan), oracle::quantumPovmError(p0, eta), 1e-12);
  });
}

TEST(PovmError, WernerProbe) {
  const double v = wernerVisibilityFromFidelity(0.964);
  const auto s = Scenario::fromEta(ProbeKind::quantum, 0.5, 1.0, NoiseSpectrum::uniform(2), v);
  const auto rs = receivedStates(s);
  const double e = povmError(0.5, rs.absent, rs.present, measurementFor(s));
  EXPECT_NEAR(e, 0.125 + 0.5 * (1 - 0.964), 1e-12);
  EXPECT_GE((0.25 - e) / 0.25, 0.40);
}

TEST(HelstromProperty, EqualsOptimalPovmInsideBandAndDirectGuessOutside) {
  const auto conv = optimalPovm(ProbeKind::conventional, NoiseSpectrum::uniform(2));
  const auto quan = optimalPovm(ProbeKind::quantum, NoiseSpectrum::uniform(2));
  forEachGridPoint([&](double p0, double eta) {
    const auto c = receivedStates(Scenario::fromEta(ProbeKind::conventional, p0, eta));
    const auto q = receivedStates(Scenario::fromEta(ProbeKind::quantum, p0, eta));
    const double hc = helstromError(p0, c.absent, c.present);
    const double hq = helstromError(p0, q.absent, q.present);
    const double guess = std::min(p0, 1 - p0);
    if (classifyRegion(ProbeKind::conventional, p0, eta).region == Region::III) {
      EXPECT_NEAR(hc, povmError(p0, c.absent, c.present, conv), 1e-10);
    } else {
      EXPECT_NEAR(hc, guess, 1e-10);
    }
    if (classifyRegion(ProbeKind::quantum, p0, eta).region == Region::III) {
      EXPECT_NEAR(hq, povmError(p0, q.absent, q.present, quan), 1e-10);
    } else {
      EXPECT_NEAR(hq, guess, 1e-10);
    }
    EXPECT_LE(hq, hc + 1e-12);
  });
}

TEST(Classify, ConventionalUselessAtHighPrior) {
  for (int j = 0; j <= 100; ++j) {
    const auto l = classifyRegion(ProbeKind::conventional, 0.7, etaFromReflectivity(j / 100.0));
    EXPECT_EQ(l.region, Region::II);
    EXPECT_EQ(l.directGuess, DirectGuess::guessAbsent);
  }
}

TEST(Classify, QuantumThresholdAtHighPrior) {
  // 0.7 < 0.3 (1 + 3 eta)  <=>  eta > 4/9  <=>  R > 2 sqrt(5) - 4
  const double rStar = 2.0 * std::sqrt(5.0) - 4.0;
  EXPECT_NEAR(etaFromReflectivity(rStar), 4.0 / 9.0, 1e-12);
  EXPECT_EQ(classifyRegion(ProbeKind::quantum, 0.7, etaFromReflectivity(rStar - 1e-6)).region, Region::II);
  EXPECT_EQ(classifyRegion(ProbeKind::quantum, 0.7, etaFromReflectivity(rStar + 1e-6)).region, Region::III);
  EXPECT_EQ(classifyRegion(ProbeKind::quantum, 0.7, etaFromReflectivity(0.6)).region, Region::III);
}

TEST(Classify, EqualPriorsAlwaysIlluminable) {
  for (int j = 1; j <= 100; ++j) {
    EXPECT_EQ(classifyRegion(ProbeKind::conventional, 0.5, j / 100.0).region, Region::III);
    EXPECT_EQ(classifyRegion(ProbeKind::quantum, 0.5, j / 100.0).region, Region::III);
  }
  // eta = 0: omega vanishes; tie goes to "absent"
  EXPECT_EQ(classifyRegion(ProbeKind::quantum, 0.5, 0.0).region, Region::II);
}

TEST(Classify, RegionIAtLowPriorAndWeakTarget) {
  const auto l = classifyRegion(ProbeKind::quantum, 0.2, 0.1);
  EXPECT_EQ(l.region, Region::I);
  EXPECT_EQ(l.directGuess, DirectGuess::guessPresent);
}

TEST(ClassifyProperty, ClosedFormAgreesWithSignTest) {
  for (auto kind : {ProbeKind::conventional, ProbeKind::quantum}) {
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        const double p0 = i / 100.0, eta = etaFromReflectivity(j / 100.0);
        const auto s = Scenario::fromEta(kind, p0, eta);
        const auto signTest = classifyRegion(s);
        EXPECT_EQ(classifyRegion(kind, p0, eta), signTest) << toString(kind) << " p0=" << p0 << " eta=" << eta;
        // also against the band inequalities evaluated exactly; edge cells are forbidden
        const auto band = oracle::gridBand(kind == ProbeKind::conventional ? 1 : 3, i, j, 100);
        EXPECT_EQ(band == oracle::GridBand::inside, signTest.region == Region::III) << "p0=" << p0 << " eta=" << eta;
        // off the edges the floating-point inequalities agree too
        if (band != oracle::GridBand::edge) {
          const bool inBand = kind == ProbeKind::conventional ? oracle::inBandConventional(p0, eta)
                                                              : oracle::inBandQuantum(p0, eta);
          EXPECT_EQ(inBand, band == oracle::GridBand::inside);
        }
      }
    }
  }
}

TEST(Classify, GeneralSpectrumUsesSignTest) {
  // at p0 = 0.5 any eta > 0 has both signs for the optimal probes
  const auto s = Scenario::fromEta(ProbeKind::quantum, 0.5, 0.4, NoiseSpectrum({0.1, 0.3, 0.6}));
  EXPECT_EQ(classifyRegion(s).region, Region::III);
  const auto far = Scenario::fromEta(ProbeKind::quantum, 0.95, 0.1, NoiseSpectrum({0.1, 0.3, 0.6}));
  EXPECT_EQ(classifyRegion(far).region, Region::II);
}

TEST(Band, EdgesMatchInequalities) {
  for (int j = 0; j <= 100; ++j) {
    const double eta = j / 100.0;
    const auto b = illuminableBand(ProbeKind::quantum, eta);
    EXPECT_NEAR(b.p0Lower, (1 - b.p0Lower) * (1 - eta), 1e-15);
    EXPECT_NEAR(b.p0Upper, (1 - b.p0Upper) * (1 + 3 * eta), 1e-15);
    const auto c = illuminableBand(ProbeKind::conventional, eta);
    EXPECT_NEAR(c.p0Upper, (1 - c.p0Upper) * (1 + eta), 1e-15);
  }
}

TEST(RegionMinimum, Examples) {
  EXPECT_NEAR(regionMinimumError({Region::II, DirectGuess::guessAbsent}, 0.7, 0.2), 0.3, 1e-15);
  EXPECT_NEAR(regionMinimumError({Region::I, DirectGuess::guessPresent}, 0.3, 0.2), 0.3, 1e-15);
  EXPECT_EQ(regionMinimumError({Region::III, DirectGuess::measure}, 0.5, 0.125), 0.125);
  // continuity at the upper quantum edge: p0/4 + 3 p1 (1 - eta)/4 = p1 when p0 = p1 (1 + 3 eta)
  for (int j = 1; j <= 100; ++j) {
    const double eta = j / 100.0;
    const double p0 = illuminableBand(ProbeKind::quantum, eta).p0Upper;
    EXPECT_NEAR(oracle::quantumPovmError(p0, eta), 1 - p0, 1e-12);
  }
}

TEST(Report, AnalyzeIdealQuantum) {
  const auto r = analyze(Scenario::fromReflectivity(ProbeKind::quantum, 0.5, 1.0));
  EXPECT_NEAR(r.helstromError, 0.125, 1e-12);
  EXPECT_NEAR(r.povmError, 0.125, 1e-12);
  EXPECT_EQ(r.regionLabel.region, Region::III);
  EXPECT_EQ(r.regionLabel.directGuess, DirectGuess::measure);
  EXPECT_EQ(r.omegaEigenvalues.size(), 4u);
  EXPECT_NEAR(r.regionMinimumError, 0.125, 1e-12);
}

TEST(Report, ForbiddenRegionMinimum) {
  const auto r = analyze(Scenario::fromReflectivity(ProbeKind::conventional, 0.7, 0.8));
  EXPECT_EQ(r.regionLabel.region, Region::II);
  EXPECT_NEAR(r.helstromError, 0.3, 1e-10);
  EXPECT_NEAR(r.regionMinimumError, 0.3, 1e-15);
  EXPECT_GT(r.povmError, 0.3);
}

}  // namespace
}  // namespace qi
