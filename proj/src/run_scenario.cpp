#include <chrono>
#include <fstream>
#include <stdexcept>

#include "lrpgd/matrix_io.hpp"
#include "lrpgd/rng.hpp"
#include "lrpgd/scenarios.hpp"
#include "lrpgd/trace_io.hpp"
#include "lrpgd/ultrasound.hpp"

namespace lrpgd {

bool ScenarioReport::any_divergence() const {
  for (const auto& a : arms)
    if (a.result.terminationReason == Termination::Divergence) return true;
  return false;
}

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json config_json(const StepConfig& c) {
  json j;
  j["method"] = method_name(c.method);
  j["alpha"] = c.alpha;
  j["maxIters"] = c.maxIters;
  j["gradTol"] = opt_json(c.gradTol);
  j["recordTiming"] = c.recordTiming;
  switch (c.method) {
    case MethodKind::DecayPrecGD:
      j["beta"] = c.beta;
      j["eta0"] = c.eta0 ? json(*c.eta0) : json("auto");
      break;
    case MethodKind::PrecGD: j["sigmaProxy"] = opt_json(c.sigmaProxy); break;
    case MethodKind::ScaledGDLambda: j["lambdaFixed"] = opt_json(c.lambdaFixed); break;
    case MethodKind::GD: break;
  }
  return j;
}

json init_json(const InitSpec& spec) {
  json j{{"kind", init_label(spec.kind)}};
  if (spec.kind != InitSpec::Kind::SpectralData) j["scale"] = spec.scale;
  return j;
}

json arm_json(const ArmOutcome& a, const StepConfig& c, const InitSpec& init) {
  json j;
  j["file"] = a.file;
  j["method"] = a.method;
  j["param"] = a.param;
  j["config"] = config_json(c);
  j["init"] = init_json(init);
  j["termination"] = termination_name(a.result.terminationReason);
  if (!a.result.detail.empty()) j["detail"] = a.result.detail;
  j["iterations"] = a.result.trace.empty() ? 0 : a.result.trace.back().iter;
  if (!a.result.trace.empty()) {
    const auto& last = a.result.trace.back();
    j["final_f"] = last.f;
    j["final_err_fro"] = opt_json(last.errFro);
  }
  j["wall_ms"] = a.wallMs;
  return j;
}

void write_outputs(const std::filesystem::path& outDir, const ScenarioReport& report) {
  for (const auto& a : report.arms) save_trace_csv(outDir / a.file, a.result.trace);
  const auto path = outDir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << report.manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ScenarioReport run_standard(const Scenario& s, json& manifest) {
  ScenarioReport report;
  const ScenarioInstance inst = instantiate(s);
  manifest["seeds"] = {{"truth", inst.seeds.truth}, {"measurements", inst.seeds.measurements},
                       {"init", inst.seeds.init}};

  // One draw per distinct initializer, shared by every arm that uses it.
  std::vector<std::pair<InitSpec, Iterate>> inits;
  auto init_for = [&](const InitSpec& spec) -> const Iterate& {
    for (const auto& [k, it] : inits)
      if (k.kind == spec.kind && k.scale == spec.scale) return it;
    inits.emplace_back(spec, initial_point(s, inst, spec));
    return inits.back().second;
  };

  for (const auto& arm : s.arms) {
    const InitSpec spec = arm.init.value_or(s.init);
    ArmOutcome a;
    a.file = arm_file_name(s, arm);
    a.method = method_name(arm.config.method);
    a.param = arm.param;
    const auto t0 = Clock::now();
    a.result = run(inst.model, init_for(spec), arm.config);
    a.wallMs = ms_since(t0);
    manifest["arms"].push_back(arm_json(a, arm.config, spec));
    report.arms.push_back(std::move(a));
  }
  return report;
}

ScenarioReport run_ultrasound(const Scenario& s, json& manifest, const std::filesystem::path& outDir) {
  ScenarioReport report;
  const UltrasoundSpec& u = s.ultrasound;
  const std::uint64_t stackSeed = derive_seed(s.seed, 0);
  const std::uint64_t sampleSeed = derive_seed(s.seed, 1);
  const SynthStack clean = synth_frame_stack(u.h, u.w, u.frames, u.rank, 0.0, stackSeed);
  const double sigma = sigma_for_snr(clean.truth.mstar, u.snrDb);
  const SynthStack syn = synth_frame_stack(u.h, u.w, u.frames, u.rank, sigma, stackSeed);
  const double truthNorm = syn.truth.mstar.norm();

  manifest["seeds"] = {{"stack", stackSeed}, {"sampling", sampleSeed}};
  manifest["ultrasound"] = {{"h", u.h},
                            {"w", u.w},
                            {"frames", u.frames},
                            {"rank", u.rank},
                            {"snr_db", u.snrDb},
                            {"noise_sigma", sigma},
                            {"input_rel_err", (syn.noisy.spaceTime - syn.truth.mstar).norm() / truthNorm}};

  const bool write = !outDir.empty();
  if (write) {
    save_matrix(outDir / (s.name + "__doppler__clean.txt"), power_doppler(clean.noisy));
    save_matrix(outDir / (s.name + "__doppler__noisy.txt"), power_doppler(syn.noisy));
  }

  for (const auto& arm : s.arms) {
    StepConfig config = arm.config;
    if (config.method == MethodKind::PrecGD && !config.sigmaProxy) config.sigmaProxy = sigma;
    ArmOutcome a;
    a.file = arm_file_name(s, arm);
    a.method = method_name(config.method);
    a.param = arm.param;
    const auto t0 = Clock::now();
    DenoiseResult d = denoise_pipeline(syn.noisy, s.searchRank, arm.samplingRate, config, sampleSeed, syn.truth);
    a.wallMs = ms_since(t0);
    a.result = std::move(d.run);
    json j = arm_json(a, config, s.init);
    j["sampling_rate"] = arm.samplingRate;
    j["output_rel_err"] = (d.denoised.spaceTime - syn.truth.mstar).norm() / truthNorm;
    if (write) {
      const std::string img = a.file.substr(0, a.file.size() - 4) + "__doppler.txt";
      save_matrix(outDir / img, power_doppler(d.denoised));
      j["doppler"] = img;
    }
    manifest["arms"].push_back(j);
    report.arms.push_back(std::move(a));
  }
  return report;
}

}  // namespace

ScenarioReport run_scenario(const Scenario& s, const std::filesystem::path& outDir) {
  if (!outDir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + outDir.string() + ": " + ec.message());
  }
  const auto t0 = Clock::now();
  json manifest;
  manifest["scenario"] = s.name;
  manifest["description"] = s.description;
  manifest["family"] = family_label(s.family);
  manifest["seed"] = s.seed;
  manifest["truth"] = {{"n", s.truth.n}, {"rStar", s.truth.rStar}, {"kappa", s.truth.kappa},
                       {"symmetric", s.truth.symmetric}};
  manifest["searchRank"] = s.searchRank;
  manifest["measurements"] = s.measurements;
  manifest["sigma"] = s.sigma;
  manifest["init"] = init_json(s.init);
  manifest["arms"] = json::array();

  ScenarioReport report;
  if (s.family == Family::SynthUltrasound)
    report = run_ultrasound(s, manifest, outDir);
  else if (!s.arms.empty())
    report = run_standard(s, manifest);
  manifest["wall_time_ms"] = ms_since(t0);
  report.manifest = std::move(manifest);
  if (!outDir.empty()) write_outputs(outDir, report);
  return report;
}

}  // namespace lrpgd
