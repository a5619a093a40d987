#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbsbd/datagen.hpp"
#include "gibbsbd/loss.hpp"
#include "gibbsbd/sampler.hpp"
#include "gibbsbd/scaling.hpp"
#include "gibbsbd/summary.hpp"

namespace gibbsbd {

// Raised for malformed configuration (bad scenario name, missing paths,
// invalid field combinations); the CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LossMode { automatic, fixed };

struct ExperimentConfig {
    std::string scenario;      // preset name; empty when dataset_path is used
    std::string dataset_path;  // external CSV; empty when scenario is used
    SamplerConfig sampler;
    PriorSpec prior;
    LossMode loss_mode = LossMode::automatic;
    LossSpec fixed_loss{1.0, 1.0, 0.0};
    int replications = 10;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "runs";
    int scaling_grid = 19;
    AnnealConfig anneal;
    bool write_plots = true;

    void validate() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);

// Stable FNV-1a hash of the canonical config JSON; names the run directory.
std::string config_hash(const ExperimentConfig& config);

struct ReplicationResult {
    int index = 0;
    bool ok = false;
    std::string message;
    bool has_error_metric = false;  // false for external data without a known truth
    double error = 0.0;
    double tau = 0.0;
    double band_coverage = -1.0;  // fraction of grid points where the band covers the truth
    LossSpec loss_used;
    std::optional<ScalingReport> scaling;
    AcceptanceStats stats;
    double seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ReplicationResult> replications;
    int n_failed = 0;
    double mean_error = 0.0;
    double sd_error = 0.0;
    double mean_c = 0.0, mean_k = 0.0, mean_z = 0.0;  // over replications with scaling
    std::string run_dir;
};

// One full desk-scale study: per replication, generate (or load) the data,
// pick the loss scale, run the chain, summarize, and write every artifact
// under out_dir/run-<hash>-s<seed>/rep-<index>/. Replication failures are
// recorded in the report rather than aborting the study.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Validated dataset import; malformed rows and out-of-domain pixels raise
// errors carrying the row number.
Dataset import_dataset(const std::string& csv_path);

}  // namespace gibbsbd
