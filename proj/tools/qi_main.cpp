// Command-line driver: phase-diagram, error-curve, mutual-info, montecarlo, state-info.
//
// Exit codes: 0 success, 2 invalid arguments, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "qi/cli/commands.hpp"
#include "qi/error.hpp"
#include "qi/random.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string kind;
  double p0 = 0.5;
  std::optional<double> reflectivity;
  std::optional<double> eta;
  std::vector<double> lambdas{0.5, 0.5};
  std::optional<double> fidelity;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  double rStep = 0.01;
  double p0Step = 0.01;
  unsigned threads = 1;
};

nlohmann::ordered_json optionalJson(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string render(const qi::cli::Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    qi::cli::writeJsonLines(os, t);
  } else {
    qi::cli::writeCsv(os, t);
  }
  return os.str();
}

std::string extensionFor(const std::string& format) { return format == "json" ? ".jsonl" : "." + format; }

/// "dir/name.csv" -> "dir/name_boundaries.csv"
std::string siblingPath(const std::string& path, const std::string& suffix, const std::string& format) {
  std::filesystem::path p(path);
  const std::string ext = p.has_extension() ? p.extension().string() : extensionFor(format);
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

void emit(const Options& o, const std::string& command, nlohmann::ordered_json params,
          std::vector<qi::tools::OutputFile> files, nlohmann::ordered_json summary = nullptr) {
  if (o.out.empty()) {
    std::cout << files.front().contents;
    return;
  }
  qi::tools::RunManifest manifest(command, std::move(params), o.seed, std::string(qi::kRngAlgorithm));
  if (!summary.is_null()) manifest.setSummary(std::move(summary));
  qi::tools::writeOutputs(files, std::move(manifest));
}

void requireFormat(const Options& o, std::initializer_list<const char*> allowed, const std::string& command) {
  for (const char* a : allowed)
    if (o.format == a) return;
  throw qi::InvalidArgument("format '" + o.format + "' is not supported by " + command);
}

void runPhaseDiagram(const Options& o) {
  requireFormat(o, {"csv", "json", "svg"}, "phase-diagram");
  qi::cli::PhaseDiagramParams p;
  p.kind = qi::probeKindFromString(o.kind.empty() ? "quantum" : o.kind);
  p.p0Step = o.p0Step;
  p.rStep = o.rStep;
  p.spectrum = qi::NoiseSpectrum(o.lambdas);
  const auto result = qi::cli::phaseDiagram(p);

  nlohmann::ordered_json params{{"kind", std::string(qi::toString(p.kind))},
                                {"p0_step", p.p0Step},
                                {"r_step", p.rStep},
                                {"lambdas", o.lambdas},
                                {"format", o.format}};
  std::vector<qi::tools::OutputFile> files;
  if (o.format == "svg") {
    files.push_back({o.out, qi::cli::phaseDiagramSvg(result)});
  } else {
    files.push_back({o.out, render(result.cellTable(), o.format)});
    if (!o.out.empty() && !result.boundaries.empty())
      files.push_back({siblingPath(o.out, "_boundaries", o.format), render(result.boundaryTable(), o.format)});
  }
  emit(o, "phase-diagram", std::move(params), std::move(files));
}

void runErrorCurve(const Options& o) {
  requireFormat(o, {"csv", "json", "svg"}, "error-curve");
  qi::cli::ErrorCurveParams p;
  if (!o.kind.empty() && o.kind != "both") p.kinds = {qi::probeKindFromString(o.kind)};
  p.p0 = o.p0;
  p.rStep = o.rStep;
  p.fidelity = o.fidelity;
  p.nTrials = o.trials;
  p.seed = o.seed;
  p.spectrum = qi::NoiseSpectrum(o.lambdas);
  p.threads = o.threads;
  const auto result = qi::cli::errorCurve(p);

  nlohmann::ordered_json kinds = nlohmann::ordered_json::array();
  for (auto k : p.kinds) kinds.push_back(std::string(qi::toString(k)));
  nlohmann::ordered_json params{{"kinds", kinds},         {"p0", p.p0},
                                {"r_step", p.rStep},      {"fidelity", optionalJson(p.fidelity)},
                                {"trials", p.nTrials},    {"seed", p.seed},
                                {"lambdas", o.lambdas},   {"format", o.format}};
  const std::string body =
      o.format == "svg" ? qi::cli::errorCurveSvg(result) : render(result.table(), o.format);
  emit(o, "error-curve", std::move(params), {{o.out, body}});
}

void runMutualInfo(const Options& o) {
  requireFormat(o, {"csv", "json", "svg"}, "mutual-info");
  qi::cli::MutualInfoParams p;
  p.p0 = o.p0;
  p.rStep = o.rStep;
  p.fidelity = o.fidelity;
  p.spectrum = qi::NoiseSpectrum(o.lambdas);
  const auto result = qi::cli::mutualInfoCurve(p);
  const auto& best = result.maxDifference();
  nlohmann::ordered_json summary{{"max_difference", best.report.difference},
                                 {"max_difference_R", best.reflectivity},
                                 {"max_difference_eta", best.eta}};
  std::cerr << "max I_q - I_c = " << qi::cli::formatDouble(best.report.difference) << " bits at R = "
            << qi::cli::formatDouble(best.reflectivity) << '\n';

  nlohmann::ordered_json params{{"p0", p.p0},
                                {"r_step", p.rStep},
                                {"fidelity", optionalJson(p.fidelity)},
                                {"lambdas", o.lambdas},
                                {"format", o.format}};
  const std::string body =
      o.format == "svg" ? qi::cli::mutualInfoSvg(result) : render(result.table(), o.format);
  emit(o, "mutual-info", std::move(params), {{o.out, body}}, std::move(summary));
}

void runMonteCarlo(const Options& o) {
  requireFormat(o, {"csv", "json"}, "montecarlo");
  qi::cli::MonteCarloParams p;
  p.kind = qi::probeKindFromString(o.kind.empty() ? "quantum" : o.kind);
  p.p0 = o.p0;
  p.reflectivity = o.reflectivity;
  p.eta = o.eta;
  p.spectrum = qi::NoiseSpectrum(o.lambdas);
  p.fidelity = o.fidelity;
  p.nTrials = o.trials;
  p.seed = o.seed;
  p.threads = o.threads;
  const auto result = qi::cli::monteCarlo(p);

  nlohmann::ordered_json params{{"kind", std::string(qi::toString(p.kind))},
                                {"p0", p.p0},
                                {"reflectivity", optionalJson(p.reflectivity)},
                                {"eta", optionalJson(p.eta)},
                                {"fidelity", optionalJson(p.fidelity)},
                                {"trials", p.nTrials},
                                {"seed", p.seed},
                                {"lambdas", o.lambdas},
                                {"format", o.format}};
  emit(o, "montecarlo", std::move(params), {{o.out, render(result.table(), o.format)}});
}

void runStateInfo(const Options& o) {
  requireFormat(o, {"csv", "json"}, "state-info");
  qi::cli::StateInfoParams p;
  p.spectrum = qi::NoiseSpectrum(o.lambdas);
  p.kind = qi::probeKindFromString(o.kind.empty() ? "quantum" : o.kind);
  p.p0 = o.p0;
  p.reflectivity = o.reflectivity;
  p.eta = o.eta;
  p.fidelity = o.fidelity;
  const auto info = qi::cli::stateInfo(p);
  // csv (the default) selects the human-readable report for this verb
  const std::string body = o.format == "json" ? info.dump(2) + "\n" : qi::cli::stateInfoText(info);
  nlohmann::ordered_json params{{"kind", std::string(qi::toString(p.kind))},
                                {"p0", p.p0},
                                {"reflectivity", optionalJson(p.reflectivity)},
                                {"eta", optionalJson(p.eta)},
                                {"fidelity", optionalJson(p.fidelity)},
                                {"lambdas", o.lambdas},
                                {"format", o.format}};
  emit(o, "state-info", std::move(params), {{o.out, body}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon target detection: Helstrom limits, optimal probes, phase diagrams"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qi::tools::kToolVersion);

  Options o;
  const auto kinds = CLI::IsMember({"conventional", "quantum"});
  const auto formats = CLI::IsMember({"csv", "json", "svg"});

  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("--lambdas", o.lambdas, "noise eigenvalues, comma separated (default 0.5,0.5)")->delimiter(',');
    sub->add_option("--out", o.out, "output file (stdout when omitted; no manifest then)");
    sub->add_option("--format", o.format, "csv | json | svg")->check(formats);
  };
  auto addScenarioPoint = [&](CLI::App* sub) {
    auto* r = sub->add_option("--reflectivity", o.reflectivity, "target reflectivity R in [0,1]");
    auto* e = sub->add_option("--eta", o.eta, "mixing ratio eta in [0,1]");
    r->excludes(e);
  };
  auto addTrials = [&](CLI::App* sub) {
    sub->add_option("--trials", o.trials, "Monte Carlo trials per point (default 100000)");
    sub->add_option("--seed", o.seed, "base seed (default 42)");
    sub->add_option("--threads", o.threads, "worker threads; results do not depend on it")->check(CLI::Range(1u, 256u));
  };

  auto* phase = app.add_subcommand("phase-diagram", "region label and minimum error on a (p0, R) grid");
  phase->add_option("--kind", o.kind, "conventional | quantum (default quantum)")->check(kinds);
  phase->add_option("--p0-step", o.p0Step, "p0 grid step (default 0.01)");
  phase->add_option("--r-step", o.rStep, "R grid step (default 0.01)");
  addCommon(phase);

  auto* curve = app.add_subcommand("error-curve", "error probability against R at fixed p0");
  curve->add_option("--kind", o.kind, "conventional | quantum | both (default both)")
      ->check(CLI::IsMember({"conventional", "quantum", "both"}));
  curve->add_option("--p0", o.p0, "prior probability of absence (default 0.5)");
  curve->add_option("--r-step", o.rStep, "R grid step (default 0.01)");
  curve->add_option("--fidelity", o.fidelity, "Bell fidelity of an imperfect entangled probe");
  addTrials(curve);
  addCommon(curve);

  auto* mi = app.add_subcommand("mutual-info", "maximised mutual information against R");
  mi->add_option("--p0", o.p0, "prior probability of absence (default 0.5)");
  mi->add_option("--r-step", o.rStep, "R grid step (default 0.01)");
  mi->add_option("--fidelity", o.fidelity, "Bell fidelity of an imperfect entangled probe");
  addCommon(mi);

  auto* mc = app.add_subcommand("montecarlo", "simulate trials at one scenario point");
  mc->add_option("--kind", o.kind, "conventional | quantum (default quantum)")->check(kinds);
  mc->add_option("--p0", o.p0, "prior probability of absence (default 0.5)");
  mc->add_option("--fidelity", o.fidelity, "Bell fidelity of an imperfect entangled probe");
  addScenarioPoint(mc);
  addTrials(mc);
  addCommon(mc);

  auto* info = app.add_subcommand("state-info", "optimal probe, received states and Helstrom spectrum");
  info->add_option("--kind", o.kind, "conventional | quantum (default quantum)")->check(kinds);
  info->add_option("--p0", o.p0, "prior probability of absence (default 0.5)");
  info->add_option("--fidelity", o.fidelity, "Bell fidelity of an imperfect entangled probe");
  addScenarioPoint(info);
  addCommon(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (phase->parsed()) runPhaseDiagram(o);
    if (curve->parsed()) runErrorCurve(o);
    if (mi->parsed()) runMutualInfo(o);
    if (mc->parsed()) runMonteCarlo(o);
    if (info->parsed()) runStateInfo(o);
  } catch (const qi::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const qi::NonCommutingStates& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const qi::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
