#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wallgp/asce41.hpp"
#include "wallgp/dataset.hpp"
#include "wallgp/error.hpp"
#include "wallgp/evaluation.hpp"
#include "wallgp/gpr.hpp"

namespace wallgp::cli {

enum class OutputFormat { Table, Document };

struct RunConfig {
    std::uint64_t seed = 42;
    std::vector<std::string> features = dataset::default_feature_names();
    transforms::TargetTransformConfig transform;
    gpr::OptimizerConfig optimizer;  // its seed is derived per model from `seed`
    int trials = 100;
    double train_fraction = 0.9;
    dataset::ScopeCriteria scope;
    evaluation::OvertrainingRule overtraining;
    int top_k = 2;
    int threads = 1;
    asce41::StressUnit stress_unit = asce41::StressUnit::Psi;
    std::filesystem::path output_dir = ".";
    OutputFormat format = OutputFormat::Table;
};

// Throws ConfigError on any invalid value.
void validate(const RunConfig& config);

// Key-value document form. Reading rejects unknown keys and starts from `base`.
nlohmann::json config_to_document(const RunConfig& config);
RunConfig config_from_document(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// "auto", "none" or a number.
transforms::TargetTransformConfig parse_lambda(const std::string& text);
// "s-sf" or "all".
dataset::ScopeCriteria parse_scope(const std::string& text);
std::vector<std::string> parse_feature_list(const std::string& text);

// Stable exit codes:
//   0 success, 1 usage/config/io, 2 schema or invalid data, 3 empty scope,
//   4 optimization failure, 5 extraction failure, 6 feature mismatch.
int exit_code_for(ErrorCode code);

// Seed of the production model for one output.
std::uint64_t model_seed(std::uint64_t seed, dataset::Output output);
// Model file for one output inside a model directory.
std::filesystem::path model_path(const std::filesystem::path& dir, dataset::Output output);

struct TrainOptions {
    std::filesystem::path database;
    std::filesystem::path model_dir;
};
void cmd_train(const TrainOptions& options, const RunConfig& config, std::ostream& out);

struct PredictOptions {
    std::filesystem::path model_dir;
    std::filesystem::path specimens;
    std::optional<std::filesystem::path> table_csv;
    std::optional<std::filesystem::path> polyline_csv;
};
void cmd_predict(const PredictOptions& options, const RunConfig& config, std::ostream& out);

struct EvaluateOptions {
    std::filesystem::path database;
    bool compare_asce41 = false;
};
void cmd_evaluate(const EvaluateOptions& options, const RunConfig& config, std::ostream& out);

struct ExtractOptions {
    std::filesystem::path hysteresis;
    double height = 0.0;
    std::string id;
    dataset::ExtractionConfig extraction;
    std::optional<std::filesystem::path> polyline_csv;
};
void cmd_extract(const ExtractOptions& options, const RunConfig& config, std::ostream& out);

struct Asce41Options {
    std::optional<std::filesystem::path> specimens;
    double v_y = 0.0;
    double height = 0.0;
    double axial = 0.0;
    std::optional<std::filesystem::path> polyline_csv;
};
void cmd_asce41(const Asce41Options& options, const RunConfig& config, std::ostream& out);

struct SynthOptions {
    std::size_t count = 200;
    double noise = 0.15;
    std::optional<std::filesystem::path> output;
};
void cmd_synth(const SynthOptions& options, const RunConfig& config, std::ostream& out);

// Full command-line entry point. Errors are printed to `err` and mapped to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wallgp::cli
