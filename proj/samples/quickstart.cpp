// Helstrom limits of conventional and entangled single-photon detection at
// equal priors, for a perfect reflector in maximally mixed polarization noise.

#include <cstdio>

#include "qi/discrimination.hpp"
#include "qi/infotheory.hpp"
#include "qi/scenario.hpp"

int main() {
  for (auto kind : {qi::ProbeKind::conventional, qi::ProbeKind::quantum}) {
    const auto s = qi::Scenario::fromReflectivity(kind, 0.5, 1.0);
    const auto states = qi::receivedStates(s);
    const auto report = qi::analyze(s);
    const auto mi = qi::maxMutualInformation(s.p0, states.absent, states.present);
    std::printf("%-12s helstrom=%.6f povm=%.6f region=%s  I=%.4f bits\n", qi::toString(kind).data(),
                report.helstromError, report.povmError, qi::toString(report.regionLabel.region).data(), mi.bits);
  }
  const auto werner = qi::Scenario::fromReflectivity(qi::ProbeKind::quantum, 0.5, 1.0, qi::NoiseSpectrum::uniform(2),
                                                     qi::wernerVisibilityFromFidelity(0.964));
  std::printf("werner F=0.964 povm error=%.6f\n", qi::analyze(werner).povmError);
}
