#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qi/cli/commands.hpp"

namespace qi::cli {
namespace {

std::string csv(const Table& t) {
  std::ostringstream os;
  writeCsv(os, t);
  return os.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

TEST(UnitGrid, Steps) {
  const auto g = unitGrid(0.01);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[37], 0.37);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(unitGrid(0.25).size(), 5u);
  EXPECT_THROW(unitGrid(0.0), InvalidArgument);
  EXPECT_THROW(unitGrid(0.3), InvalidArgument);
  EXPECT_THROW(unitGrid(2.0), InvalidArgument);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(formatDouble(0.125), "0.125");
  EXPECT_EQ(formatDouble(0.1), "0.1");
  EXPECT_EQ(formatDouble(1.0), "1");
  EXPECT_EQ(std::stod(formatDouble(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, Rfc4180Quoting) {
  EXPECT_EQ(csvField("plain"), "plain");
  EXPECT_EQ(csvField("a,b"), "\"a,b\"");
  EXPECT_EQ(csvField("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csvField("two\nlines"), "\"two\nlines\"");
  Table t{{"name", "x", "v"}, {}};
  t.add({std::string("a,b"), 0.5, std::vector<double>{1.0, -0.5}});
  t.add({Cell{}, std::int64_t{3}, std::vector<double>{}});
  EXPECT_EQ(csv(t), "name,x,v\n\"a,b\",0.5,1;-0.5\n,3,\n");
}

TEST(Json, MirrorsCsvRows) {
  Table t{{"name", "x", "v"}, {}};
  t.add({std::string("a"), 0.5, std::vector<double>{1.0, -0.5}});
  t.add({Cell{}, std::int64_t{3}, std::vector<double>{}});
  std::ostringstream os;
  writeJsonLines(os, t);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), 2u);
  const auto first = nlohmann::json::parse(ls[0]);
  EXPECT_EQ(first["name"], "a");
  EXPECT_EQ(first["x"], 0.5);
  EXPECT_EQ(first["v"], nlohmann::json::array({1.0, -0.5}));
  EXPECT_TRUE(nlohmann::json::parse(ls[1])["name"].is_null());
  EXPECT_EQ(ls[0].substr(0, 8), "{\"name\":");  // column order is kept
}

TEST(PhaseDiagram, DefaultGridHasOneRowPerCell) {
  const auto r = phaseDiagram({});
  EXPECT_EQ(r.cells.size(), 101u * 101u);
  EXPECT_EQ(lines(csv(r.cellTable())).size(), 101u * 101u + 1);
  EXPECT_EQ(r.boundaries.size(), 3u * 101u);
}

TEST(PhaseDiagram, KnownCells) {
  PhaseDiagramParams p;
  const auto q = phaseDiagram(p);
  p.kind = ProbeKind::conventional;
  const auto c = phaseDiagram(p);
  auto at = [](const PhaseDiagramResult& r, int i, int j) { return r.cells.at(static_cast<std::size_t>(i * 101 + j)); };
  const auto cell = at(q, 70, 60);
  EXPECT_EQ(cell.p0, 0.7);
  EXPECT_EQ(cell.reflectivity, 0.6);
  EXPECT_EQ(cell.label.region, Region::III);
  EXPECT_NEAR(cell.minError, oracle::quantumPovmError(0.7, cell.eta), 1e-12);
  for (int j = 0; j <= 100; ++j) {
    EXPECT_TRUE(at(c, 70, j).label.forbidden()) << j;
    EXPECT_NEAR(at(c, 70, j).minError, 0.3, 1e-12);
  }
}

TEST(PhaseDiagram, BoundaryPolylinesFollowClosedForms) {
  const auto r = phaseDiagram({});
  for (const auto& b : r.boundaries) {
    const double p1 = 1.0 - b.p0;
    if (b.boundary == "lower") {
      EXPECT_NEAR(b.p0, p1 * (1.0 - b.eta), 1e-12);
    }
    if (b.boundary == "conventional_upper") {
      EXPECT_NEAR(b.p0, p1 * (1.0 + b.eta), 1e-12);
    }
    if (b.boundary == "quantum_upper") {
      EXPECT_NEAR(b.p0, p1 * (1.0 + 3.0 * b.eta), 1e-12);
    }
  }
}

TEST(PhaseDiagram, NoBoundariesForGeneralNoise) {
  PhaseDiagramParams p;
  p.p0Step = p.rStep = 0.25;
  p.spectrum = NoiseSpectrum({0.2, 0.8});
  const auto r = phaseDiagram(p);
  EXPECT_EQ(r.cells.size(), 25u);
  EXPECT_TRUE(r.boundaries.empty());
}

TEST(ErrorCurve, IdealEndpoints) {
  ErrorCurveParams p;
  p.nTrials = 20000;
  const auto r = errorCurve(p);
  ASSERT_EQ(r.rows.size(), 2u * 101u);
  const auto& convEnd = r.rows[100];
  const auto& quanEnd = r.rows[201];
  EXPECT_EQ(convEnd.kind, ProbeKind::conventional);
  EXPECT_EQ(quanEnd.kind, ProbeKind::quantum);
  EXPECT_NEAR(quanEnd.quantumLimit, 0.125, 1e-12);
  EXPECT_NEAR(quanEnd.classicalLimit, 0.25, 1e-12);
  EXPECT_NEAR(convEnd.point.report.helstromError, 0.25, 1e-12);
  EXPECT_FALSE(quanEnd.imperfectTheory.has_value());
  EXPECT_EQ(lines(csv(r.table())).size(), 203u);
}

TEST(ErrorCurve, ImperfectProbeEndpoint) {
  ErrorCurveParams p;
  p.kinds = {ProbeKind::quantum};
  p.fidelity = 0.964;
  p.nTrials = 0;
  p.rStep = 0.1;
  const auto r = errorCurve(p);
  ASSERT_TRUE(r.rows.back().imperfectTheory.has_value());
  EXPECT_NEAR(*r.rows.back().imperfectTheory, 0.143, 1e-12);
  EXPECT_NEAR(*r.rows.back().imperfectTheory, oracle::quantumPovmError(0.5, 1.0, 0.964), 1e-12);
  p.fidelity = 0.1;
  EXPECT_THROW(errorCurve(p), InvalidArgument);
}

TEST(ErrorCurve, PlateauAtSixTenths) {
  ErrorCurveParams p;
  p.p0 = 0.6;
  p.nTrials = 0;
  const auto r = errorCurve(p);
  std::size_t plateau = 0;
  for (const auto& row : r.rows) {
    if (row.point.report.regionLabel.forbidden()) {
      EXPECT_NEAR(row.point.report.regionMinimumError, 0.4, 1e-12);
      ++plateau;
    }
  }
  EXPECT_GT(plateau, 0u);
  // quantum curve leaves the plateau at lower R than the conventional one
  auto firstIlluminable = [&](ProbeKind k) {
    for (const auto& row : r.rows)
      if (row.kind == k && !row.point.report.regionLabel.forbidden()) return row.point.reflectivity;
    return 2.0;
  };
  EXPECT_LT(firstIlluminable(ProbeKind::quantum), firstIlluminable(ProbeKind::conventional));
}

TEST(MutualInfo, CurveExamples) {
  const auto r = mutualInfoCurve({});
  ASSERT_EQ(r.rows.size(), 101u);
  EXPECT_NEAR(r.rows.front().report.iConventional, 0.0, 1e-12);
  EXPECT_NEAR(r.rows.front().report.iQuantum, 0.0, 1e-12);
  EXPECT_NEAR(r.rows.back().report.iQuantum, oracle::mutualInformationJoint(0.5, 0.25, 1.0), 1e-12);
  EXPECT_NEAR(r.rows.back().report.iConventional, oracle::mutualInformationJoint(0.5, 0.5, 1.0), 1e-12);
  for (const auto& row : r.rows) EXPECT_GE(row.report.difference, 0.0);
  const auto& best = r.maxDifference();
  for (const auto& row : r.rows) EXPECT_LE(row.report.difference, best.report.difference);
}

TEST(ResolveScenario, ExclusiveInputs) {
  EXPECT_THROW(resolveScenario(ProbeKind::quantum, 0.5, 0.5, 0.5, NoiseSpectrum::uniform(2), std::nullopt),
               InvalidArgument);
  const auto s = resolveScenario(ProbeKind::quantum, 0.5, std::nullopt, std::nullopt, NoiseSpectrum::uniform(2),
                                 std::nullopt);
  EXPECT_EQ(s.eta, 1.0);
  const auto c = resolveScenario(ProbeKind::conventional, 0.5, 0.6, std::nullopt, NoiseSpectrum::uniform(2), 0.9);
  EXPECT_FALSE(c.wernerVisibility.has_value());
}

TEST(MonteCarlo, TwoStrategies) {
  MonteCarloParams p;
  p.nTrials = 50000;
  const auto r = monteCarlo(p);
  const auto t = r.table();
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(r.report.helstromError, 0.125, 1e-12);
  EXPECT_LE(std::abs(r.measured.errorRate - 0.125), 3.0 * r.measured.wilsonStandardError());
  EXPECT_LE(std::abs(r.directGuess.errorRate - 0.5), 3.0 * r.directGuess.wilsonStandardError());
  EXPECT_EQ(monteCarlo(p).measured, r.measured);
}

TEST(StateInfo, Examples) {
  StateInfoParams p;
  auto j = stateInfo(p);
  EXPECT_NEAR(j["mus"][0].get<double>(), 0.7071, 1e-4);
  EXPECT_NEAR(j["mus"][1].get<double>(), 0.7071, 1e-4);
  EXPECT_NEAR(j["probe_state"][0][3][0].get<double>(), 0.5, 1e-15);  // |HH><VV| coherence of the Bell state
  EXPECT_EQ(j["eta"], 0.5);
  EXPECT_FALSE(stateInfoText(j).empty());

  p.spectrum = NoiseSpectrum({0.2, 0.8});
  j = stateInfo(p);
  EXPECT_NEAR(j["mus_squared"][0].get<double>(), 0.8, 1e-12);
  EXPECT_NEAR(j["mus_squared"][1].get<double>(), 0.2, 1e-12);

  p.kind = ProbeKind::conventional;
  p.reflectivity = 0.5;
  j = stateInfo(p);
  EXPECT_FALSE(j.contains("mus"));
  EXPECT_EQ(j["omega_eigenvalues"].size(), 2u);
}

}  // namespace
}  // namespace qi::cli
