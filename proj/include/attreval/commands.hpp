#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "attreval/client.hpp"
#include "attreval/simulate.hpp"

namespace attreval {

/// Each command returns a process exit code: 0 on success, 1 on any error,
/// after printing a diagnostic to `err`. Summary lines go to `out`.

struct RepurposeOptions {
    std::string dataset;
    std::filesystem::path input;
    std::filesystem::path output;
    std::optional<std::filesystem::path> mapping_file;
    std::optional<std::filesystem::path> drop_report;
    uint64_t seed = 0;
    bool strict = false;
};
int cmd_repurpose(const RepurposeOptions& options, std::ostream& out = std::cout,
                  std::ostream& err = std::cerr);

struct IndexOptions {
    std::filesystem::path corpus;
    std::filesystem::path output;
    double k1 = 1.2;
    double b = 0.75;
    bool strict = false;
};
int cmd_index(const IndexOptions& options, std::ostream& out = std::cout,
              std::ostream& err = std::cerr);

struct SimulateOptions {
    std::filesystem::path qa;
    std::filesystem::path output;
    std::optional<std::filesystem::path> index_path;
    std::optional<std::filesystem::path> drop_report;
    SimulationConfig config;
    /// Use the built-in deterministic substituter instead of an endpoint.
    bool mock_substituter = false;
    std::optional<std::filesystem::path> replay;
    std::optional<std::filesystem::path> record;
    EndpointConfig endpoint;  // used when base_url is non-empty
    bool strict = false;
};
int cmd_simulate(const SimulateOptions& options, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);

struct EvaluateOptions {
    std::filesystem::path examples;
    std::filesystem::path output;
    std::string variant = "attribution";
    int shots = 0;
    std::optional<std::filesystem::path> demos_file;
    std::optional<std::filesystem::path> template_file;
    size_t budget_tokens = 2048;
    int max_new_tokens = 512;
    double temperature = 0.0;
    int concurrency = 1;
    /// Answer every prompt with the example's own gold label; needs labels.
    bool mock_oracle = false;
    std::optional<std::filesystem::path> replay;
    std::optional<std::filesystem::path> record;
    EndpointConfig endpoint;  // used when base_url is non-empty
    bool strict = false;
};
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);

struct ScoreOptions {
    std::filesystem::path predictions;
    std::filesystem::path gold;
    std::optional<std::filesystem::path> report_out;
    bool strict = false;
};
int cmd_score(const ScoreOptions& options, std::ostream& out = std::cout,
              std::ostream& err = std::cerr);

struct ExportOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    std::string format = "instruction_tuning";  // or "plain"
    bool strict = false;
};
int cmd_export(const ExportOptions& options, std::ostream& out = std::cout,
               std::ostream& err = std::cerr);

struct SampleOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    size_t n = 0;
    uint64_t seed = 0;
    bool stratified = false;
    bool strict = false;
};
int cmd_sample(const SampleOptions& options, std::ostream& out = std::cout,
               std::ostream& err = std::cerr);

void print_version(std::ostream& out);
std::string version_text();

}  // namespace attreval
