#pragma once

// The computations behind each CLI verb. Every command returns typed rows
// plus their flat Table encoding; the driver in tools/ only parses flags and
// writes files.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qi/cli/svg.hpp"
#include "qi/cli/table.hpp"
#include "qi/discrimination.hpp"
#include "qi/infotheory.hpp"
#include "qi/montecarlo.hpp"
#include "qi/scenario.hpp"

namespace qi::cli {

/// {0, 1/n, ..., 1} with n = 1/step; step must divide 1.
inline std::vector<double> unitGrid(double step) {
  detail::require(std::isfinite(step) && step > 0.0 && step <= 1.0, "grid step must lie in (0, 1]");
  const double n = std::round(1.0 / step);
  detail::require(std::abs(n * step - 1.0) <= 1e-9, "grid step must divide 1 evenly");
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> g(count + 1);
  for (std::size_t i = 0; i <= count; ++i) g[i] = static_cast<double>(i) / n;
  return g;
}

inline bool isUniformQubitNoise(const NoiseSpectrum& s) {
  return s.dim() == 2 && std::abs(s[0] - 0.5) <= 1e-12 && std::abs(s[1] - 0.5) <= 1e-12;
}

inline std::optional<double> visibilityFor(std::optional<double> fidelity) {
  if (!fidelity) return std::nullopt;
  return wernerVisibilityFromFidelity(*fidelity);
}

inline Cell optCell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

// ---------------------------------------------------------------- phase-diagram

struct PhaseDiagramParams {
  ProbeKind kind = ProbeKind::quantum;
  double p0Step = 0.01;
  double rStep = 0.01;
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
};

struct PhaseCell {
  double p0, reflectivity, eta;
  RegionLabel label;
  double minError;
  double helstromError;
};

struct BoundaryPoint {
  std::string boundary;  // lower | conventional_upper | quantum_upper
  double reflectivity, eta, p0;
};

struct PhaseDiagramResult {
  ProbeKind kind;
  double p0Step, rStep;
  std::vector<PhaseCell> cells;
  std::vector<BoundaryPoint> boundaries;

  Table cellTable() const {
    Table t{{"kind", "p0", "R", "eta", "region", "direct_guess", "min_error", "helstrom_error"}, {}};
    for (const auto& c : cells) {
      t.add({std::string(toString(kind)), c.p0, c.reflectivity, c.eta, std::string(toString(c.label.region)),
             std::string(toString(c.label.directGuess)), c.minError, c.helstromError});
    }
    return t;
  }

  Table boundaryTable() const {
    Table t{{"boundary", "R", "eta", "p0"}, {}};
    for (const auto& b : boundaries) t.add({b.boundary, b.reflectivity, b.eta, b.p0});
    return t;
  }
};

/// Region label and minimum error per (p0, R) cell from the sign test of the
/// Helstrom operator. Band edges are emitted for uniform qubit noise, where
/// they have closed forms.
inline PhaseDiagramResult phaseDiagram(const PhaseDiagramParams& p) {
  const auto p0s = unitGrid(p.p0Step);
  const auto rs = unitGrid(p.rStep);
  PhaseDiagramResult out{p.kind, p.p0Step, p.rStep, {}, {}};
  out.cells.reserve(p0s.size() * rs.size());
  for (double p0 : p0s) {
    for (double r : rs) {
      const auto s = Scenario::fromReflectivity(p.kind, p0, r, p.spectrum);
      const auto rep = analyze(s);
      out.cells.push_back({p0, r, s.eta, rep.regionLabel, rep.regionMinimumError, rep.helstromError});
    }
  }
  if (isUniformQubitNoise(p.spectrum)) {
    for (double r : rs) {
      const double eta = etaFromReflectivity(r);
      const auto conv = illuminableBand(ProbeKind::conventional, eta);
      const auto quan = illuminableBand(ProbeKind::quantum, eta);
      out.boundaries.push_back({"lower", r, eta, conv.p0Lower});
      out.boundaries.push_back({"conventional_upper", r, eta, conv.p0Upper});
      out.boundaries.push_back({"quantum_upper", r, eta, quan.p0Upper});
    }
  }
  return out;
}

inline std::string phaseDiagramSvg(const PhaseDiagramResult& r) {
  std::vector<svg::Cell2D> cells;
  cells.reserve(r.cells.size());
  for (const auto& c : r.cells) {
    const char* color = c.label.region == Region::I ? "#f4c7c3" : c.label.region == Region::II ? "#c6dbef" : "#d9f0d3";
    cells.push_back({c.reflectivity, c.p0, color});
  }
  std::vector<svg::Series> overlays;
  auto curve = [&](const std::string& name, const std::string& color, bool dashed) {
    svg::Series s{name, color, dashed, false, {}, {}};
    for (const auto& b : r.boundaries)
      if (b.boundary == name) s.points.emplace_back(b.reflectivity, b.p0);
    return s;
  };
  if (!r.boundaries.empty()) {
    overlays.push_back(curve("lower", "#000000", false));
    const bool quantum = r.kind == ProbeKind::quantum;
    overlays.push_back(curve("conventional_upper", "#000000", quantum));
    if (quantum) overlays.push_back(curve("quantum_upper", "#000000", false));
  }
  return svg::regionMap(std::string("Phase diagram (") + std::string(toString(r.kind)) +
                            "): I red, II blue, III green",
                        "reflectivity R", "prior of absence p0", cells, r.rStep, r.p0Step, overlays);
}

// ---------------------------------------------------------------- error-curve

struct ErrorCurveParams {
  std::vector<ProbeKind> kinds{ProbeKind::conventional, ProbeKind::quantum};
  double p0 = 0.5;
  double rStep = 0.01;
  std::optional<double> fidelity;
  std::uint64_t nTrials = 100000;
  std::uint64_t seed = 42;
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
  unsigned threads = 1;
};

struct ErrorCurveRow {
  ProbeKind kind;
  double p0;
  SweepPoint point;
  double classicalLimit;
  double quantumLimit;
  std::optional<double> imperfectTheory;
};

struct ErrorCurveResult {
  std::vector<ErrorCurveRow> rows;

  Table table() const {
    Table t{{"kind", "p0", "R", "eta", "n_trials", "error_rate", "ci_low", "ci_high", "helstrom_error", "povm_error",
             "region", "region_min_error", "classical_limit", "quantum_limit", "imperfect_theory"},
            {}};
    for (const auto& r : rows) {
      const auto& e = r.point.estimate;
      t.add({std::string(toString(r.kind)), r.p0, r.point.reflectivity, r.point.eta,
             e ? Cell{static_cast<std::int64_t>(e->nTrials)} : Cell{}, e ? Cell{e->errorRate} : Cell{},
             e ? Cell{e->ciLow} : Cell{}, e ? Cell{e->ciHigh} : Cell{}, r.point.report.helstromError,
             r.point.report.povmError, std::string(toString(r.point.report.regionLabel.region)),
             r.point.report.regionMinimumError, r.classicalLimit, r.quantumLimit, optCell(r.imperfectTheory)});
    }
    return t;
  }
};

/// Kind k of the sweep uses base seed (seed + k), with k = 0 conventional and
/// k = 1 quantum; point i then draws from deriveSeed(base, i).
inline ErrorCurveResult errorCurve(const ErrorCurveParams& p) {
  detail::requireProbability(p.p0, "p0");
  detail::require(!p.kinds.empty(), "at least one kind is required");
  const auto rs = unitGrid(p.rStep);
  const auto visibility = visibilityFor(p.fidelity);

  std::vector<double> classical, quantum;
  std::vector<std::optional<double>> imperfect;
  for (double r : rs) {
    classical.push_back(analyze(Scenario::fromReflectivity(ProbeKind::conventional, p.p0, r, p.spectrum)).regionMinimumError);
    quantum.push_back(analyze(Scenario::fromReflectivity(ProbeKind::quantum, p.p0, r, p.spectrum)).regionMinimumError);
    if (visibility) {
      imperfect.push_back(
          analyze(Scenario::fromReflectivity(ProbeKind::quantum, p.p0, r, p.spectrum, visibility)).povmError);
    } else {
      imperfect.emplace_back();
    }
  }

  ErrorCurveResult out;
  for (ProbeKind kind : p.kinds) {
    const std::uint64_t base = p.seed + (kind == ProbeKind::conventional ? 0u : 1u);
    auto pts = sweepErrorCurve(kind, p.p0, rs, visibility, p.nTrials, base, p.spectrum, p.threads);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out.rows.push_back({kind, p.p0, std::move(pts[i]), classical[i], quantum[i], imperfect[i]});
    }
  }
  return out;
}

inline std::string errorCurveSvg(const ErrorCurveResult& r) {
  svg::Series classical{"classical limit", "#d62728", true, false, {}, {}};
  svg::Series quantum{"quantum limit", "#000000", false, false, {}, {}};
  svg::Series imperfect{"imperfect probe theory", "#1f77b4", true, false, {}, {}};
  svg::Series mcConv{"MC conventional", "#d62728", false, true, {}, {}};
  svg::Series mcQuan{"MC quantum", "#1f77b4", false, true, {}, {}};
  double p0 = 0.5;
  bool haveImperfect = false;
  for (const auto& row : r.rows) {
    p0 = row.p0;
    const double x = row.point.reflectivity;
    if (row.kind == r.rows.front().kind) {
      classical.points.emplace_back(x, row.classicalLimit);
      quantum.points.emplace_back(x, row.quantumLimit);
      if (row.imperfectTheory) {
        imperfect.points.emplace_back(x, *row.imperfectTheory);
        haveImperfect = true;
      }
    }
    if (row.point.estimate) {
      auto& s = row.kind == ProbeKind::conventional ? mcConv : mcQuan;
      s.points.emplace_back(x, row.point.estimate->errorRate);
      s.errorBars.emplace_back(row.point.estimate->ciLow, row.point.estimate->ciHigh);
    }
  }
  std::vector<svg::Series> series{classical, quantum};
  if (haveImperfect) series.push_back(imperfect);
  if (!mcConv.points.empty()) series.push_back(mcConv);
  if (!mcQuan.points.empty()) series.push_back(mcQuan);
  return svg::lineChart("Error probability, p0 = " + formatDouble(p0), "reflectivity R", "error probability", series,
                        std::make_pair(0.0, 1.0));
}

// ---------------------------------------------------------------- mutual-info

struct MutualInfoParams {
  double p0 = 0.5;
  double rStep = 0.01;
  std::optional<double> fidelity;
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
};

struct MutualInfoRow {
  double reflectivity, eta;
  MutualInfoReport report;
};

struct MutualInfoResult {
  double p0;
  std::vector<MutualInfoRow> rows;

  Table table() const {
    Table t{{"p0", "R", "eta", "i_c", "i_q", "difference"}, {}};
    for (const auto& r : rows)
      t.add({p0, r.reflectivity, r.eta, r.report.iConventional, r.report.iQuantum, r.report.difference});
    return t;
  }

  /// Grid point with the largest I_q - I_c (first one on ties).
  const MutualInfoRow& maxDifference() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].report.difference > rows[best].report.difference) best = i;
    return rows.at(best);
  }
};

inline MutualInfoResult mutualInfoCurve(const MutualInfoParams& p) {
  detail::requireProbability(p.p0, "p0");
  const auto visibility = visibilityFor(p.fidelity);
  MutualInfoResult out{p.p0, {}};
  for (double r : unitGrid(p.rStep)) {
    const double eta = etaFromReflectivity(r);
    out.rows.push_back({r, eta, mutualInfoReport(p.p0, eta, p.spectrum, visibility)});
  }
  return out;
}

inline std::string mutualInfoSvg(const MutualInfoResult& r) {
  svg::Series ic{"I_c", "#d62728", false, false, {}, {}};
  svg::Series iq{"I_q", "#1f77b4", true, false, {}, {}};
  svg::Series diff{"I_q - I_c", "#2ca02c", false, false, {}, {}};
  for (const auto& row : r.rows) {
    ic.points.emplace_back(row.reflectivity, row.report.iConventional);
    iq.points.emplace_back(row.reflectivity, row.report.iQuantum);
    diff.points.emplace_back(row.reflectivity, row.report.difference);
  }
  return svg::lineChart("Mutual information, p0 = " + formatDouble(r.p0), "reflectivity R", "bits", {ic, iq, diff},
                        std::make_pair(0.0, 1.0));
}

// ---------------------------------------------------------------- montecarlo

/// Builds a scenario from either a reflectivity or a mixing ratio (not both).
inline Scenario resolveScenario(ProbeKind kind, double p0, std::optional<double> reflectivity,
                                std::optional<double> eta, const NoiseSpectrum& spectrum,
                                std::optional<double> fidelity) {
  detail::require(!(reflectivity && eta), "--reflectivity and --eta are mutually exclusive");
  const auto visibility = kind == ProbeKind::quantum ? visibilityFor(fidelity) : std::nullopt;
  if (eta) return Scenario::fromEta(kind, p0, *eta, spectrum, visibility);
  return Scenario::fromReflectivity(kind, p0, reflectivity.value_or(1.0), spectrum, visibility);
}

struct MonteCarloParams {
  ProbeKind kind = ProbeKind::quantum;
  double p0 = 0.5;
  std::optional<double> reflectivity;
  std::optional<double> eta;
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
  std::optional<double> fidelity;
  std::uint64_t nTrials = 100000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct MonteCarloResult {
  Scenario scenario;
  DetectionReport report;
  ErrorEstimate measured;     // illuminable-region measurement
  ErrorEstimate directGuess;

  Table table() const {
    Table t{{"strategy", "kind", "p0", "R", "eta", "n_trials", "n_errors", "error_rate", "ci_low", "ci_high",
             "helstrom_error", "povm_error", "region", "region_min_error", "omega_eigenvalues"},
            {}};
    auto row = [&](const std::string& name, const ErrorEstimate& e) {
      t.add({name, std::string(toString(scenario.kind)), scenario.p0, optCell(scenario.reflectivity), scenario.eta,
             static_cast<std::int64_t>(e.nTrials), static_cast<std::int64_t>(e.nErrors), e.errorRate, e.ciLow,
             e.ciHigh, report.helstromError, report.povmError, std::string(toString(report.regionLabel.region)),
             report.regionMinimumError, report.omegaEigenvalues});
    };
    row("povm", measured);
    row("direct-guess", directGuess);
    return t;
  }
};

/// The measurement run draws from deriveSeed(seed, 0), the direct-guess run
/// from deriveSeed(seed, 1).
inline MonteCarloResult monteCarlo(const MonteCarloParams& p) {
  detail::require(p.nTrials >= 1, "--trials must be at least 1");
  auto s = resolveScenario(p.kind, p.p0, p.reflectivity, p.eta, p.spectrum, p.fidelity);
  auto report = analyze(s);
  auto measured = runTrials(TrialConfig{s, measurementFor(s), p.nTrials, deriveSeed(p.seed, 0), p.threads});
  auto guess = directGuessTrials(s.p0, p.nTrials, deriveSeed(p.seed, 1), p.threads);
  return {std::move(s), std::move(report), measured, guess};
}

// ---------------------------------------------------------------- state-info

struct StateInfoParams {
  NoiseSpectrum spectrum = NoiseSpectrum::uniform(2);
  ProbeKind kind = ProbeKind::quantum;
  double p0 = 0.5;
  std::optional<double> reflectivity;
  std::optional<double> eta;
  std::optional<double> fidelity;
};

inline nlohmann::ordered_json matrixJson(const ComplexMatrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

/// Probe, received states and Helstrom spectrum at one sample point.
inline nlohmann::ordered_json stateInfo(const StateInfoParams& p) {
  auto eta = p.eta;
  if (!eta && !p.reflectivity) eta = 0.5;
  const auto s = resolveScenario(p.kind, p.p0, p.reflectivity, eta, p.spectrum, p.fidelity);
  const auto probe = probeFor(s);
  const auto states = receivedStates(s, probe);
  const auto rep = analyze(s);

  nlohmann::ordered_json j;
  j["kind"] = std::string(toString(s.kind));
  j["lambdas"] = std::vector<double>(s.spectrum.lambdas().begin(), s.spectrum.lambdas().end());
  if (probe.kind == ProbeKind::quantum) {
    j["mus"] = probe.mus;
    std::vector<double> sq;
    for (double m : probe.mus) sq.push_back(m * m);
    j["mus_squared"] = sq;
  }
  j["werner_visibility"] = s.wernerVisibility ? nlohmann::ordered_json(*s.wernerVisibility) : nullptr;
  j["probe_state"] = matrixJson(probe.state.matrix());
  j["p0"] = s.p0;
  j["R"] = s.reflectivity ? nlohmann::ordered_json(*s.reflectivity) : nullptr;
  j["eta"] = s.eta;
  j["received_absent"] = matrixJson(states.absent.matrix());
  j["received_present"] = matrixJson(states.present.matrix());
  j["omega_eigenvalues"] = rep.omegaEigenvalues;
  j["region"] = std::string(toString(rep.regionLabel.region));
  j["direct_guess"] = std::string(toString(rep.regionLabel.directGuess));
  j["helstrom_error"] = rep.helstromError;
  j["povm_error"] = rep.povmError;
  j["region_min_error"] = rep.regionMinimumError;
  return j;
}

inline std::string matrixText(const nlohmann::ordered_json& m) {
  std::ostringstream os;
  for (const auto& row : m) {
    os << "    [";
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double re = row[k][0].get<double>();
      const double im = row[k][1].get<double>();
      os << (k ? "  " : "") << formatFixed(re, 4) << (im < 0 ? "-" : "+") << formatFixed(std::abs(im), 4) << 'i';
    }
    os << "]\n";
  }
  return os.str();
}

inline std::string stateInfoText(const nlohmann::ordered_json& j) {
  auto list = [](const nlohmann::ordered_json& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + formatFixed(v[i].get<double>(), 4);
    return s + ")";
  };
  std::ostringstream os;
  os << "kind:              " << j["kind"].get<std::string>() << '\n';
  os << "noise eigenvalues: " << list(j["lambdas"]) << '\n';
  if (j.contains("mus")) {
    os << "mu:                " << list(j["mus"]) << '\n';
    os << "mu^2:              " << list(j["mus_squared"]) << '\n';
  }
  if (!j["werner_visibility"].is_null())
    os << "werner visibility: " << formatFixed(j["werner_visibility"].get<double>(), 4) << '\n';
  os << "probe state:\n" << matrixText(j["probe_state"]);
  os << "p0 = " << formatFixed(j["p0"].get<double>(), 4);
  if (!j["R"].is_null()) os << ", R = " << formatFixed(j["R"].get<double>(), 4);
  os << ", eta = " << formatFixed(j["eta"].get<double>(), 4) << '\n';
  os << "received state, target absent:\n" << matrixText(j["received_absent"]);
  os << "received state, target present:\n" << matrixText(j["received_present"]);
  os << "omega eigenvalues: " << list(j["omega_eigenvalues"]) << '\n';
  os << "region:            " << j["region"].get<std::string>() << " (" << j["direct_guess"].get<std::string>() << ")\n";
  os << "helstrom error:    " << formatFixed(j["helstrom_error"].get<double>(), 6) << '\n';
  os << "povm error:        " << formatFixed(j["povm_error"].get<double>(), 6) << '\n';
  os << "minimum error:     " << formatFixed(j["region_min_error"].get<double>(), 6) << '\n';
  return os.str();
}

}  // namespace qi::cli
