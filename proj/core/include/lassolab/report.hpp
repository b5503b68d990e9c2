#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lassolab/bandit_lab.hpp"
#include "lassolab/fixtures.hpp"
#include "lassolab/seq_lab.hpp"
#include "lassolab/svg.hpp"

namespace lassolab {

struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { sequential, bandit, fixtures };

struct SeqMethodSpec {
    std::string name;
    SeqEstimator estimator = SeqEstimator::opt_lasso;
    double C0 = 0.8;
    double C0_hard = 0.6;
};

struct BanditMethodSpec {
    std::string name;
    PolicyKind policy = PolicyKind::three_stage;
};

struct FixturesSpec {
    std::string what = "packing";  // "packing" or "omega1"
    std::size_t d = 7;
    std::size_t s = 3;
    double r = 1.0;
    double delta = 0.1;
    std::size_t n = 1000;  // omega1 draw count
};

/// One experiment: a scenario plus the methods run on it under common random
/// numbers (replication r of every method uses stream (seed, r)).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sequential;
    std::string label = "custom";
    SequentialScenario seq;
    std::vector<SeqMethodSpec> seq_methods;
    BanditScenario bandit;
    std::vector<BanditMethodSpec> bandit_methods;
    FixturesSpec fixtures;
    std::uint64_t fixture_seed = 20250810;
    std::string output_dir = "out";
    std::size_t parallel_jobs = 0;  // 0 = all hardware threads

    std::size_t reps() const;
    std::uint64_t seed() const;
};

struct TableRow {
    std::string scenario;
    std::string method;
    std::string metric;
    Aggregate agg;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// JSON round trip. `config_from_json_text` also accepts a manifest (the
/// embedded "config" object is unwrapped), so a run can be reproduced from
/// its own manifest.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

struct ExperimentResult {
    std::filesystem::path manifest_path;
    std::vector<TableRow> table;
};

/// Runs all replications (fanned over streams (seed, rep), deterministic
/// ordered reduce), writes table.csv / curves.csv / manifest.json into
/// output_dir and returns the manifest path. table.csv header is always
/// `scenario,method,metric,mean,sem,sd,reps,seed`.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepResult {
    std::vector<double> C0_grid;
    std::vector<double> C0_hard_grid;
    std::vector<std::vector<TableRow>> cells;  // [C0 index][C0_hard index]
    std::vector<TableRow> lasso_column;        // sequential sweeps only
    std::size_t min_row = 0;
    std::size_t min_col = 0;
};

/// One cell per (C0, C0_hard) on the base scenario's primary method
/// (OPT-Lasso for sequential bases, the three-stage policy for bandit
/// bases); the minimum-mean cell is flagged.
SweepResult sensitivity_sweep(const std::vector<double>& C0_grid,
                              const std::vector<double>& C0_hard_grid,
                              const ExperimentConfig& base);

struct PresetOverrides {
    std::optional<std::size_t> reps;
    std::optional<std::size_t> T;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> parallel_jobs;
    std::optional<std::string> output_dir;
};

/// Named presets: seq-a..seq-d, bandit-a..bandit-h, table1 (all sequential
/// rows), table2 (all bandit rows), table3/table4 (bandit-e/-f sensitivity
/// sweeps). Scenario labels and (s0, d, T, K) values follow the paper's
/// catalog; reps, T and seed are overridable for desk scale.
std::vector<std::string> preset_names();
std::vector<ExperimentConfig> expand_preset(const std::string& name,
                                            const PresetOverrides& ov = {});

struct PresetResult {
    std::filesystem::path table_csv;  // combined over all scenarios of the preset
    std::vector<ExperimentResult> experiments;
};

PresetResult run_preset(const std::string& name, const PresetOverrides& ov = {});

std::string version_string();

}  // namespace lassolab
