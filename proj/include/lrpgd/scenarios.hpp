#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrpgd/measurements.hpp"
#include "lrpgd/optimizers.hpp"
#include "lrpgd/types.hpp"

namespace lrpgd {

enum class Family { GaussianSensing, OneBit, PhaseRetrieval, SynthUltrasound };

const char* family_label(Family f);

struct TruthSpec {
  Index n = 10;
  Index rStar = 2;
  double kappa = 100.0;
  bool symmetric = true;
};

struct InitSpec {
  enum class Kind { SpectralOracle, Small, SpectralData };
  Kind kind = Kind::SpectralOracle;
  double scale = 0.1;  // oracle perturbation, or the small-init scale
};

const char* init_label(InitSpec::Kind k);

struct UltrasoundSpec {
  Index h = 50;
  Index w = 40;
  Index frames = 200;
  Index rank = 10;
  double snrDb = 20.0;
};

struct Arm {
  StepConfig config;
  std::string param;            // file-name suffix, empty for none
  std::optional<InitSpec> init;  // overrides the scenario initializer
  double samplingRate = 1.0;     // synth-ultrasound only
};

struct Scenario {
  std::string name;
  std::string description;
  Family family = Family::GaussianSensing;
  TruthSpec truth;
  Index searchRank = 8;
  Index measurements = 160;  // m, or Bernoulli trials per entry for one-bit
  double sigma = 0.0;
  InitSpec init;
  UltrasoundSpec ultrasound;
  std::vector<Arm> arms;
  std::uint64_t seed = 1;
};

/// The registry of desk-scale studies, in listing order.
std::vector<Scenario> builtin_scenarios();

/// Throws std::invalid_argument for an unknown name.
Scenario find_scenario(const std::string& name);

/// Partial StepConfig read from JSON with StepConfig's field names. `beta`
/// and `eta0` touch DecayPrecGD arms only, `sigmaProxy` PrecGD arms and
/// `lambdaFixed` ScaledGDLambda arms; the rest apply to every arm.
struct StepOverrides {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::optional<double>> eta0;  // inner empty = "auto"
  std::optional<double> lambdaFixed;
  std::optional<double> sigmaProxy;
  std::optional<std::size_t> maxIters;
  std::optional<double> gradTol;
  std::optional<bool> recordTiming;
};

/// Unknown keys and mistyped values are rejected with std::invalid_argument.
StepOverrides parse_overrides(const nlohmann::json& j);
StepOverrides load_overrides(const std::filesystem::path& path);

void apply_overrides(Scenario& s, const StepOverrides& o);

/// `<scenario>__<method>[__<param>].csv`
std::string arm_file_name(const Scenario& s, const Arm& arm);

// --- instantiation -----------------------------------------------------------

struct ScenarioSeeds {
  std::uint64_t truth = 0;
  std::uint64_t measurements = 0;
  std::uint64_t init = 0;
};

ScenarioSeeds scenario_seeds(std::uint64_t seed);

/// Truth, measurements and initial point for the non-ultrasound families.
struct ScenarioInstance {
  MeasurementModel model;
  ScenarioSeeds seeds;
};

ScenarioInstance instantiate(const Scenario& s);

/// Initial point of a given spec for an instantiated scenario; identical
/// specs give identical draws.
Iterate initial_point(const Scenario& s, const ScenarioInstance& inst, const InitSpec& spec);

// --- running -----------------------------------------------------------------

struct ArmOutcome {
  std::string file;
  std::string method;
  std::string param;
  RunResult result;
  double wallMs = 0.0;
};

struct ScenarioReport {
  std::vector<ArmOutcome> arms;
  nlohmann::json manifest;

  bool any_divergence() const;
};

/// Runs every arm from the shared initial point. When outDir is non-empty,
/// writes one trace CSV per arm and manifest.json there (plus power-Doppler
/// images for synth-ultrasound). Arm divergence is recorded, not thrown.
ScenarioReport run_scenario(const Scenario& s, const std::filesystem::path& outDir = {});

}  // namespace lrpgd
