#include "lrpgd/scenarios.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lrpgd/ground_truth.hpp"
#include "lrpgd/init.hpp"
#include "lrpgd/rng.hpp"
#include "lrpgd/ultrasound.hpp"

namespace lrpgd {

const char* family_label(Family f) {
  switch (f) {
    case Family::GaussianSensing: return "gaussian-sensing";
    case Family::OneBit: return "one-bit";
    case Family::PhaseRetrieval: return "phase-retrieval";
    case Family::SynthUltrasound: return "synth-ultrasound";
  }
  return "?";
}

const char* init_label(InitSpec::Kind k) {
  switch (k) {
    case InitSpec::Kind::SpectralOracle: return "spectral-oracle";
    case InitSpec::Kind::Small: return "small";
    case InitSpec::Kind::SpectralData: return "spectral-data";
  }
  return "?";
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

StepConfig base(MethodKind method, double alpha, std::size_t iters) {
  StepConfig c;
  c.method = method;
  c.alpha = alpha;
  c.maxIters = iters;
  return c;
}

Arm decay(double alpha, double beta, std::size_t iters) {
  Arm a{base(MethodKind::DecayPrecGD, alpha, iters), "", std::nullopt};
  a.config.beta = beta;
  return a;
}

Arm precgd(double alpha, double sigmaHat, std::size_t iters) {
  Arm a{base(MethodKind::PrecGD, alpha, iters), "sigmahat=" + num(sigmaHat), std::nullopt};
  a.config.sigmaProxy = sigmaHat;
  return a;
}

Arm scaled(double alpha, double lambda, std::size_t iters) {
  Arm a{base(MethodKind::ScaledGDLambda, alpha, iters), "lambda=" + num(lambda), std::nullopt};
  a.config.lambdaFixed = lambda;
  return a;
}

Arm gd(double alpha, std::size_t iters) { return Arm{base(MethodKind::GD, alpha, iters), "", std::nullopt}; }

Scenario gaussian(std::string name, std::string description, double kappa, Index r, double sigma) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.family = Family::GaussianSensing;
  s.truth = {10, 2, kappa, true};
  s.searchRank = r;
  s.measurements = 160;
  s.sigma = sigma;
  return s;
}

// Four-method comparison shared by the one-bit, phase and well-conditioned
// studies: DecayPrecGD, PrecGD, ScaledGD(lambda), GD.
void four_arms(Scenario& s, double alpha, double beta, double sigmaHat, double lambda, std::size_t iters) {
  s.arms = {decay(alpha, beta, iters), precgd(alpha, sigmaHat, iters), scaled(alpha, lambda, iters),
            gd(alpha, iters)};
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;

  {
    Scenario s = gaussian("gauss-illcond-noiseless", "Gaussian sensing, kappa=100, r=8 > r*=2, no noise", 100, 8, 0.0);
    const std::size_t T = 300;
    s.arms = {decay(0.1, 0.85, T), precgd(0.1, 0.0, T)};
    for (double lambda : {1e-2, 1e-4, 1e-6, 1e-9}) s.arms.push_back(scaled(0.1, lambda, T));
    s.arms.push_back(gd(0.1, T));
    out.push_back(std::move(s));
  }
  {
    Scenario s = gaussian("gauss-illcond-noisy", "Gaussian sensing, kappa=100, r=8 > r*=2, sigma=1e-6", 100, 8, 1e-6);
    const std::size_t T = 300;
    s.arms = {decay(0.1, 0.5, T)};
    for (double sh : {1e-6, 1e-5, 1e-4, 1e-3}) s.arms.push_back(precgd(0.1, sh, T));
    for (double lambda : {1e-2, 1e-4, 1e-6, 1e-9}) s.arms.push_back(scaled(0.1, lambda, T));
    s.arms.push_back(gd(0.1, T));
    out.push_back(std::move(s));
  }
  {
    Scenario s = gaussian("gauss-wellcond-noiseless", "Gaussian sensing, kappa=1, r=r*=2, no noise", 1, 2, 0.0);
    four_arms(s, 0.1, 0.1, 0.0, 0.0, 500);
    out.push_back(std::move(s));
  }
  {
    Scenario s = gaussian("gauss-wellcond-noisy", "Gaussian sensing, kappa=1, r=4 > r*=2, sigma=1e-6", 1, 4, 1e-6);
    four_arms(s, 0.1, 0.1, 1e-5, 1e-2, 500);
    out.push_back(std::move(s));
  }
  {
    Scenario s = gaussian("gauss-smallinit", "Spectral-start DecayPrecGD against small-start ScaledGD and GD, sigma=1e-6",
                          100, 8, 1e-6);
    const std::size_t T = 1000;
    const InitSpec small{InitSpec::Kind::Small, 1e-12};
    s.arms = {decay(0.1, 0.5, T), scaled(0.1, 1e-2, T), gd(0.1, T)};
    for (std::size_t k = 1; k < s.arms.size(); ++k) {
      s.arms[k].init = small;
      s.arms[k].param += s.arms[k].param.empty() ? "init=small" : "_init=small";
    }
    out.push_back(std::move(s));
  }
  {
    Scenario s = gaussian("gauss-highnoise", "Gaussian sensing, kappa=100, r=8, sigma=0.1", 100, 8, 0.1);
    const std::size_t T = 500;
    s.arms = {decay(0.01, 0.97, T)};
    for (double sh : {1.0, 0.7, 0.5, 0.1}) s.arms.push_back(precgd(0.01, sh, T));
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "onebit-noiseless";
    s.description = "1-bit sensing, kappa=100, r=r*=2, 10^6 trials per entry";
    s.family = Family::OneBit;
    s.truth = {10, 2, 100, true};
    s.searchRank = 2;
    s.measurements = 1000000;
    four_arms(s, 1.0, 0.4, 0.0, 0.0, 200);
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "onebit-noisy";
    s.description = "1-bit sensing, kappa=100, r=4 > r*=2, sigma=1e-6, 10^4 trials per entry";
    s.family = Family::OneBit;
    s.truth = {10, 2, 100, true};
    s.searchRank = 4;
    s.measurements = 10000;
    s.sigma = 1e-6;
    four_arms(s, 1.0, 0.4, 1e-5, 1e-2, 200);
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "phase-noiseless";
    s.description = "Complex phase retrieval, n=10, m=80, r=1";
    s.family = Family::PhaseRetrieval;
    s.truth = {10, 1, 1, true};
    s.searchRank = 1;
    s.measurements = 80;
    four_arms(s, 0.02, 0.1, 0.0, 0.0, 1000);
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "phase-noisy";
    s.description = "Complex phase retrieval, n=10, m=80, r=2, sigma=1e-6";
    s.family = Family::PhaseRetrieval;
    s.truth = {10, 1, 1, true};
    s.searchRank = 2;
    s.measurements = 80;
    s.sigma = 1e-6;
    four_arms(s, 0.02, 0.1, 1e-5, 1e-2, 1000);
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "synth-ultrasound";
    s.description = "Completion denoising of a synthetic 50x40x200 rank-10 clip at 20 dB, 30 iterations";
    s.family = Family::SynthUltrasound;
    s.init = {InitSpec::Kind::SpectralData, 0.0};
    s.searchRank = s.ultrasound.rank;
    s.truth = {s.ultrasound.h * s.ultrasound.w, s.ultrasound.rank, kSynthKappa, false};
    const double N = static_cast<double>(s.ultrasound.h * s.ultrasound.w * s.ultrasound.frames);
    const std::size_t T = 30;
    for (double rate : {0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2}) {
      Arm a = decay(kCompletionAlphaPerEntry * N, 0.05, T);
      a.param = "rate=" + num(rate);
      a.samplingRate = rate;
      s.arms.push_back(a);
    }
    // Without an explicit proxy the runner uses the generated noise level.
    Arm p = precgd(kCompletionAlphaPerEntry * N, 0.0, T);
    p.config.sigmaProxy.reset();
    p.param = "rate=0.5";
    p.samplingRate = 0.5;
    s.arms.push_back(p);
    Arm g = gd(kCompletionGdAlphaPerEntry * N, T);
    g.param = "rate=0.5";
    g.samplingRate = 0.5;
    s.arms.push_back(g);
    out.push_back(std::move(s));
  }
  return out;
}

Scenario find_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

// --- overrides -----------------------------------------------------------------

namespace {

double as_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw std::invalid_argument("override '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

StepOverrides parse_overrides(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("override file must hold a JSON object");
  StepOverrides o;
  for (const auto& [key, v] : j.items()) {
    if (key == "alpha") o.alpha = as_number(v, key);
    else if (key == "beta") o.beta = as_number(v, key);
    else if (key == "eta0") {
      if (v.is_string() && v.get<std::string>() == "auto") o.eta0 = std::optional<double>{};
      else o.eta0 = std::optional<double>{as_number(v, key)};
    } else if (key == "lambdaFixed") o.lambdaFixed = as_number(v, key);
    else if (key == "sigmaProxy") o.sigmaProxy = as_number(v, key);
    else if (key == "maxIters") {
      if (!v.is_number_unsigned()) throw std::invalid_argument("override 'maxIters' must be a nonnegative integer");
      o.maxIters = v.get<std::size_t>();
    } else if (key == "gradTol") o.gradTol = as_number(v, key);
    else if (key == "recordTiming") {
      if (!v.is_boolean()) throw std::invalid_argument("override 'recordTiming' must be a boolean");
      o.recordTiming = v.get<bool>();
    } else
      throw std::invalid_argument("unknown override '" + key + "'");
  }
  return o;
}

StepOverrides load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open override file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return parse_overrides(j);
}

void apply_overrides(Scenario& s, const StepOverrides& o) {
  for (auto& arm : s.arms) {
    StepConfig& c = arm.config;
    if (o.alpha) c.alpha = *o.alpha;
    if (o.maxIters) c.maxIters = *o.maxIters;
    if (o.gradTol) c.gradTol = *o.gradTol;
    if (o.recordTiming) c.recordTiming = *o.recordTiming;
    if (c.method == MethodKind::DecayPrecGD) {
      if (o.beta) c.beta = *o.beta;
      if (o.eta0) c.eta0 = *o.eta0;
    }
    if (c.method == MethodKind::PrecGD && o.sigmaProxy) c.sigmaProxy = *o.sigmaProxy;
    if (c.method == MethodKind::ScaledGDLambda && o.lambdaFixed) c.lambdaFixed = *o.lambdaFixed;
  }
}

std::string arm_file_name(const Scenario& s, const Arm& arm) {
  std::string name = s.name + "__" + method_name(arm.config.method);
  if (!arm.param.empty()) name += "__" + arm.param;
  return name + ".csv";
}

// --- instantiation -------------------------------------------------------------

ScenarioSeeds scenario_seeds(std::uint64_t seed) {
  return {derive_seed(seed, 0), derive_seed(seed, 1), derive_seed(seed, 2)};
}

ScenarioInstance instantiate(const Scenario& s) {
  ScenarioInstance inst;
  inst.seeds = scenario_seeds(s.seed);
  switch (s.family) {
    case Family::GaussianSensing: {
      auto gt = make_ground_truth(s.truth.n, s.truth.rStar, s.truth.kappa, s.truth.symmetric, inst.seeds.truth);
      inst.model.data = gaussian_ensemble(gt, s.measurements, s.sigma, inst.seeds.measurements);
      inst.model.truth = std::move(gt);
      break;
    }
    case Family::OneBit: {
      auto gt = make_ground_truth(s.truth.n, s.truth.rStar, s.truth.kappa, true, inst.seeds.truth);
      inst.model.data = onebit_ensemble(gt, s.measurements, s.sigma, inst.seeds.measurements);
      inst.model.truth = std::move(gt);
      break;
    }
    case Family::PhaseRetrieval: {
      auto gt = make_phase_truth(s.truth.n, inst.seeds.truth);
      inst.model.data = phase_ensemble(gt, s.measurements, s.sigma, inst.seeds.measurements);
      inst.model.truth = std::move(gt);
      break;
    }
    case Family::SynthUltrasound:
      throw std::invalid_argument("instantiate: synth-ultrasound arms build their own sampled models");
  }
  return inst;
}

Iterate initial_point(const Scenario& s, const ScenarioInstance& inst, const InitSpec& spec) {
  const Index r = s.searchRank;
  switch (spec.kind) {
    case InitSpec::Kind::SpectralOracle:
      if (std::holds_alternative<GroundTruth<cdouble>>(inst.model.truth))
        return SymFactor<cdouble>{spectral_oracle(inst.model.complex_truth(), r, spec.scale, inst.seeds.init)};
      return SymFactor<double>{spectral_oracle(inst.model.real_truth(), r, spec.scale, inst.seeds.init)};
    case InitSpec::Kind::Small: {
      const Index n = inst.model.real_truth().mstar.rows();
      return SymFactor<double>{small_init(n, r, spec.scale, derive_seed(inst.seeds.init, 1))};
    }
    case InitSpec::Kind::SpectralData: return spectral_data(inst.model, r);
  }
  throw std::logic_error("initial_point: unhandled kind");
}

}  // namespace lrpgd
