#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrpgd/gradcheck.hpp"
#include "lrpgd/matrix_io.hpp"
#include "lrpgd/rng.hpp"
#include "lrpgd/scenarios.hpp"
#include "lrpgd/trace_io.hpp"
#include "lrpgd/ultrasound.hpp"

namespace fs = std::filesystem;
using namespace lrpgd;

namespace {

constexpr int kOk = 0;
constexpr int kDiverged = 1;
constexpr int kUsage = 2;

void print_arm(const ArmOutcome& a) {
  const auto& last = a.result.trace.back();
  std::printf("  %-16s %-22s %-10s iters=%-5zu f=%-12.4g", a.method.c_str(), a.param.c_str(),
              termination_name(a.result.terminationReason), last.iter, last.f);
  if (last.errFro) std::printf(" err_fro=%.4g", *last.errFro);
  std::printf("\n");
}

int cmd_list() {
  for (const auto& s : builtin_scenarios())
    std::printf("%-26s %2zu arms  %s\n", s.name.c_str(), s.arms.size(), s.description.c_str());
  return kOk;
}

struct RunArgs {
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::optional<std::size_t> iters;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::string config;
};

int cmd_run(const RunArgs& args) {
  Scenario s = find_scenario(args.scenario);
  s.seed = args.seed;
  if (!args.config.empty()) apply_overrides(s, load_overrides(args.config));
  StepOverrides flags;
  flags.maxIters = args.iters;
  flags.beta = args.beta;
  flags.alpha = args.alpha;
  apply_overrides(s, flags);

  const ScenarioReport report = run_scenario(s, args.out);
  std::printf("%s (seed %llu) -> %s\n", s.name.c_str(), static_cast<unsigned long long>(s.seed), args.out.c_str());
  for (const auto& a : report.arms) print_arm(a);
  return report.any_divergence() ? kDiverged : kOk;
}

struct DenoiseArgs {
  std::vector<Index> frames;
  Index rank = 10;
  double sampling = 0.5;
  std::optional<double> sigma;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::size_t iters = 30;
};

int cmd_denoise(const DenoiseArgs& args) {
  const Index h = args.frames[0], w = args.frames[1], T = args.frames[2];
  const std::uint64_t stackSeed = derive_seed(args.seed, 0);
  const double sigma = args.sigma ? *args.sigma
                                  : sigma_for_snr(synth_frame_stack(h, w, T, args.rank, 0.0, stackSeed).truth.mstar, 20.0);
  const SynthStack syn = synth_frame_stack(h, w, T, args.rank, sigma, stackSeed);

  StepConfig config;
  config.method = MethodKind::DecayPrecGD;
  config.alpha = kCompletionAlphaPerEntry * static_cast<double>(h * w * T);
  config.beta = 0.05;
  config.maxIters = args.iters;
  const DenoiseResult d = denoise_pipeline(syn.noisy, args.rank, args.sampling, config, derive_seed(args.seed, 1), syn.truth);

  const fs::path out = args.out;
  fs::create_directories(out);
  save_trace_csv(out / "denoise__DecayPrecGD.csv", d.run.trace);
  save_matrix(out / "denoise__doppler__noisy.txt", power_doppler(syn.noisy));
  save_matrix(out / "denoise__doppler__denoised.txt", power_doppler(d.denoised));

  const double truthNorm = syn.truth.mstar.norm();
  const double inErr = (syn.noisy.spaceTime - syn.truth.mstar).norm() / truthNorm;
  const double outErr = (d.denoised.spaceTime - syn.truth.mstar).norm() / truthNorm;
  nlohmann::json manifest{{"command", "denoise"},
                          {"h", h},
                          {"w", w},
                          {"frames", T},
                          {"rank", args.rank},
                          {"sampling_rate", args.sampling},
                          {"noise_sigma", sigma},
                          {"seed", args.seed},
                          {"termination", termination_name(d.run.terminationReason)},
                          {"input_rel_err", inErr},
                          {"output_rel_err", outErr}};
  std::ofstream mf(out / "manifest.json");
  if (!(mf << manifest.dump(2) << '\n')) throw std::runtime_error("cannot write " + (out / "manifest.json").string());
  std::printf("denoise %lldx%lldx%lld rank %lld rate %g: input rel err %.4g -> output %.4g (%s)\n",
              static_cast<long long>(h), static_cast<long long>(w), static_cast<long long>(T),
              static_cast<long long>(args.rank), args.sampling, inErr, outErr, termination_name(d.run.terminationReason));
  return d.run.terminationReason == Termination::Divergence ? kDiverged : kOk;
}

int cmd_gradcheck() {
  bool ok = true;
  for (const auto& r : gradient_check_suite()) {
    std::printf("%-18s points=%d max_rel_err=%.3e\n", r.family.c_str(), r.points, r.maxRelError);
    ok = ok && r.maxRelError <= 1e-6;
  }
  return ok ? kOk : kDiverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioned low-rank recovery experiments"};
  app.require_subcommand(1);

  app.add_subcommand("list", "List built-in scenarios");

  RunArgs runArgs;
  auto* run = app.add_subcommand("run", "Run a scenario and write traces and a manifest");
  run->add_option("scenario", runArgs.scenario, "Scenario name")->required();
  run->add_option("--seed", runArgs.seed, "Master seed");
  run->add_option("--out", runArgs.out, "Output directory");
  run->add_option("--iters", runArgs.iters, "Iteration budget for every arm");
  run->add_option("--beta", runArgs.beta, "Decay rate for DecayPrecGD arms");
  run->add_option("--alpha", runArgs.alpha, "Step size for every arm");
  run->add_option("--config", runArgs.config, "JSON file of StepConfig overrides")->check(CLI::ExistingFile);

  DenoiseArgs denoiseArgs;
  auto* denoise = app.add_subcommand("denoise", "Denoise a synthetic frame stack by completion");
  denoise->add_option("--frames", denoiseArgs.frames, "Frame height, width and count")->expected(3)->required();
  denoise->add_option("--rank", denoiseArgs.rank, "Search rank")->required()->check(CLI::PositiveNumber);
  denoise->add_option("--sampling", denoiseArgs.sampling, "Sampling rate in (0, 1]")->required();
  denoise->add_option("--sigma", denoiseArgs.sigma, "Noise level (default: 20 dB input SNR)");
  denoise->add_option("--out", denoiseArgs.out, "Output directory");
  denoise->add_option("--seed", denoiseArgs.seed, "Master seed");
  denoise->add_option("--iters", denoiseArgs.iters, "Iteration budget");

  app.add_subcommand("gradcheck", "Finite-difference check of every loss gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (run->parsed()) return cmd_run(runArgs);
    if (denoise->parsed()) return cmd_denoise(denoiseArgs);
    return cmd_gradcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
