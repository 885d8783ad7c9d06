#include <array>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attreval/commands.hpp"

namespace {

void add_endpoint_flags(CLI::App* cmd, attreval::EndpointConfig& endpoint) {
    cmd->add_option("--base-url", endpoint.base_url,
                    "Chat-completion endpoint, e.g. http://localhost:8000/v1");
    cmd->add_option("--model", endpoint.model_id, "Model id sent to the endpoint");
    cmd->add_option("--credential-env", endpoint.credential_env,
                    "Name of the environment variable holding the API key");
    cmd->add_option("--requests-per-minute", endpoint.requests_per_minute,
                    "Throttle outgoing requests; 0 disables");
    cmd->add_option("--max-attempts", endpoint.retry.max_attempts,
                    "Retry attempts for transient endpoint failures");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attribution evaluation toolkit: build labeled (query, answer, reference) "
                 "datasets and judge attributions with an LLM endpoint"};
    app.set_config("--config", "", "Read options from an INI file");
    app.set_version_flag("--version", attreval::version_text());
    app.require_subcommand(0, 1);

    int exit_code = 0;

    attreval::RepurposeOptions repurpose;
    auto* repurpose_cmd =
        app.add_subcommand("repurpose", "Reground a fact-checking, NLI, or summarization "
                                        "dataset into attribution labels");
    repurpose_cmd->add_option("--dataset", repurpose.dataset, "Source dataset name")->required();
    repurpose_cmd->add_option("--input", repurpose.input, "Source records JSONL")->required();
    repurpose_cmd->add_option("--output", repurpose.output, "Examples JSONL to write")->required();
    repurpose_cmd->add_option("--mapping", repurpose.mapping_file,
                              "JSON file overriding label mappings");
    repurpose_cmd->add_option("--drop-report", repurpose.drop_report,
                              "JSONL listing dropped records and reasons");
    repurpose_cmd->add_option("--seed", repurpose.seed, "Seed for constructed evidence draws");
    repurpose_cmd->add_flag("--strict", repurpose.strict,
                            "Reject unknown fields and unmapped labels");
    repurpose_cmd->callback([&] { exit_code = cmd_repurpose(repurpose); });

    attreval::IndexOptions index;
    auto* index_cmd = app.add_subcommand("index", "Build a passage index for negative mining");
    index_cmd->add_option("--corpus", index.corpus, "Corpus JSONL with doc_id and text")
        ->required();
    index_cmd->add_option("--output", index.output, "Index file to write")->required();
    index_cmd->add_option("--k1", index.k1, "Term-frequency saturation");
    index_cmd->add_option("--b", index.b, "Length normalization");
    index_cmd->add_flag("--strict", index.strict, "Reject unknown fields");
    index_cmd->callback([&] { exit_code = cmd_index(index); });

    attreval::SimulateOptions simulate;
    std::vector<double> mix;
    auto* simulate_cmd = app.add_subcommand(
        "simulate", "Manufacture labeled examples from QA records");
    simulate_cmd->add_option("--qa", simulate.qa, "QA records JSONL")->required();
    simulate_cmd->add_option("--output", simulate.output, "Examples JSONL to write")->required();
    simulate_cmd->add_option("--index", simulate.index_path,
                             "Passage index for extrapolatory negatives");
    simulate_cmd->add_option("--drop-report", simulate.drop_report,
                             "JSONL listing dropped records and reasons");
    simulate_cmd->add_option("--seed", simulate.config.seed, "Run seed");
    simulate_cmd
        ->add_option("--class-mix", mix,
                     "Strategy weights: attributable, answer-swap, context-swap, extrapolatory")
        ->expected(4)
        ->delimiter(',');
    simulate_cmd->add_option("--retry-budget", simulate.config.retry_budget,
                             "Candidate attempts before dropping a record");
    simulate_cmd->add_flag("--longify", simulate.config.longify,
                           "Rewrite short answers into sentences via the generator");
    simulate_cmd->add_flag("--answer-from-model", simulate.config.answer_from_model,
                           "Take extrapolatory answers from the generator");
    simulate_cmd->add_option("--min-overlap", simulate.config.min_overlap,
                             "Minimum answer/context overlap ratio; 0 disables");
    simulate_cmd->add_option("--negative-depth", simulate.config.negative_depth,
                             "Passages scanned for an answer-free negative");
    simulate_cmd->add_option("--max-new-tokens", simulate.config.max_new_tokens,
                             "Generation cap for substitution calls");
    simulate_cmd->add_flag("--mock-substituter", simulate.mock_substituter,
                           "Use the built-in deterministic substituter");
    simulate_cmd->add_option("--replay", simulate.replay, "Replay a recorded cassette");
    simulate_cmd->add_option("--record", simulate.record, "Record exchanges to a cassette");
    simulate_cmd->add_flag("--strict", simulate.strict, "Reject unknown fields");
    add_endpoint_flags(simulate_cmd, simulate.endpoint);
    simulate_cmd->callback([&] {
        if (!mix.empty()) {
            for (size_t i = 0; i < 4; ++i) simulate.config.class_mix[i] = mix[i];
        }
        exit_code = cmd_simulate(simulate);
    });

    attreval::EvaluateOptions evaluate;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "Prompt a model to judge each example");
    evaluate_cmd->add_option("--examples", evaluate.examples, "Examples JSONL")->required();
    evaluate_cmd->add_option("--output", evaluate.output, "Predictions JSONL to write")
        ->required();
    evaluate_cmd->add_option("--variant", evaluate.variant,
                             "Prompt wording: attribution, fact_checking, nli, summarization");
    evaluate_cmd->add_option("--shots", evaluate.shots, "Demonstrations to include (0 or up to 3)");
    evaluate_cmd->add_option("--demos", evaluate.demos_file, "Demo fixture file");
    evaluate_cmd->add_option("--template", evaluate.template_file,
                             "Custom prompt template with {claim} and {context}");
    evaluate_cmd->add_option("--budget-tokens", evaluate.budget_tokens,
                             "Whitespace-token cap per prompt");
    evaluate_cmd->add_option("--max-new-tokens", evaluate.max_new_tokens, "Generation cap");
    evaluate_cmd->add_option("--temperature", evaluate.temperature, "Sampling temperature");
    evaluate_cmd->add_option("--concurrency", evaluate.concurrency, "Parallel requests");
    evaluate_cmd->add_flag("--mock-oracle", evaluate.mock_oracle,
                           "Answer with each example's own gold label (offline)");
    evaluate_cmd->add_option("--replay", evaluate.replay, "Replay a recorded cassette");
    evaluate_cmd->add_option("--record", evaluate.record, "Record exchanges to a cassette");
    evaluate_cmd->add_flag("--strict", evaluate.strict, "Reject unknown fields");
    add_endpoint_flags(evaluate_cmd, evaluate.endpoint);
    evaluate_cmd->callback([&] { exit_code = cmd_evaluate(evaluate); });

    attreval::ScoreOptions score;
    auto* score_cmd = app.add_subcommand("score", "Score predictions against gold labels");
    score_cmd->add_option("--predictions", score.predictions, "Predictions JSONL")->required();
    score_cmd->add_option("--gold", score.gold, "Labeled examples JSONL")->required();
    score_cmd->add_option("--report", score.report_out, "Report JSON to write");
    score_cmd->add_flag("--strict", score.strict, "Reject unknown fields");
    score_cmd->callback([&] { exit_code = cmd_score(score); });

    attreval::ExportOptions export_opts;
    auto* export_cmd =
        app.add_subcommand("export", "Convert examples for training or interchange");
    export_cmd->add_option("--input", export_opts.input, "Examples JSONL")->required();
    export_cmd->add_option("--output", export_opts.output, "File to write")->required();
    export_cmd->add_option("--format", export_opts.format, "instruction_tuning or plain");
    export_cmd->add_flag("--strict", export_opts.strict, "Reject unknown fields");
    export_cmd->callback([&] { exit_code = cmd_export(export_opts); });

    attreval::SampleOptions sample;
    auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded subsample of examples");
    sample_cmd->add_option("--input", sample.input, "Examples JSONL")->required();
    sample_cmd->add_option("--output", sample.output, "Examples JSONL to write")->required();
    sample_cmd->add_option("-n,--n", sample.n, "Sample size")->required();
    sample_cmd->add_option("--seed", sample.seed, "Sampling seed");
    sample_cmd->add_flag("--stratified", sample.stratified, "Keep label proportions");
    sample_cmd->add_flag("--strict", sample.strict, "Reject unknown fields");
    sample_cmd->callback([&] { exit_code = cmd_sample(sample); });

    CLI11_PARSE(app, argc, argv);
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }
    return exit_code;
}
