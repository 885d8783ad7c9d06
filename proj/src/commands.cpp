#include "attreval/commands.hpp"

#include <algorithm>
#include <cstdio>

#include "attreval/errors.hpp"
#include "attreval/evaluator.hpp"
#include "attreval/metrics.hpp"
#include "attreval/prompts.hpp"
#include "attreval/repurpose.hpp"
#include "attreval/rng.hpp"
#include "attreval/version.hpp"

namespace attreval {

namespace {

IoMode mode_of(bool strict) { return strict ? IoMode::Strict : IoMode::Lenient; }

std::string fixed3(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

int fail(std::ostream& err, const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
}

/// Builds the client stack shared by evaluate and simulate: replay beats a
/// live endpoint, and a recorder wraps whichever was chosen.
struct ClientStack {
    std::unique_ptr<GenerationClient> base;
    std::unique_ptr<CassetteRecorder> recorder;

    GenerationClient* get() {
        if (recorder) return recorder.get();
        return base.get();
    }
};

ClientStack build_client(const std::optional<std::filesystem::path>& replay,
                         const std::optional<std::filesystem::path>& record,
                         const EndpointConfig& endpoint,
                         std::unique_ptr<GenerationClient> offline) {
    ClientStack stack;
    if (replay) {
        stack.base = std::make_unique<ReplayClient>(*replay);
    } else if (offline) {
        stack.base = std::move(offline);
    } else if (!endpoint.base_url.empty()) {
        stack.base = make_http_client(endpoint);
    }
    if (record && stack.base) {
        stack.recorder = std::make_unique<CassetteRecorder>(*stack.base, *record);
    }
    return stack;
}

}  // namespace

int cmd_repurpose(const RepurposeOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const SourceDataset dataset = parse_dataset(options.dataset);
        MappingTable table = MappingTable::defaults();
        if (options.mapping_file) table.apply_overrides_file(*options.mapping_file);
        const auto records = read_source_jsonl(options.input, mode_of(options.strict));
        const auto outcome =
            repurpose_records(dataset, records, table, options.seed, options.strict);
        write_examples_jsonl(options.output, outcome.examples);
        if (options.drop_report) write_drop_report(*options.drop_report, outcome.drops);
        out << "wrote " << outcome.examples.size() << " examples to " << options.output.string()
            << " (" << outcome.drops.size() << " dropped)\n";
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

int cmd_index(const IndexOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto corpus = read_corpus_jsonl(options.corpus, mode_of(options.strict));
        const Bm25Index index = Bm25Index::build(corpus, options.k1, options.b);
        index.save(options.output);
        out << "indexed " << index.num_passages() << " passages to " << options.output.string()
            << '\n';
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto records = read_qa_jsonl(options.qa, mode_of(options.strict));
        std::optional<Bm25Index> index;
        if (options.index_path) index = Bm25Index::load(*options.index_path);

        std::unique_ptr<GenerationClient> offline;
        if (options.mock_substituter) offline = make_hash_client();
        ClientStack stack =
            build_client(options.replay, options.record, options.endpoint, std::move(offline));

        const SimulationResult result =
            simulate_dataset(records, index ? &*index : nullptr, stack.get(), options.config);
        write_examples_jsonl(options.output, result.examples);
        if (options.drop_report) write_drop_report(*options.drop_report, result.drops);

        out << "simulated " << result.examples.size() << " examples to "
            << options.output.string() << " (" << result.drops.size() << " dropped)\n";
        for (size_t i = 0; i < result.emitted.size(); ++i) {
            out << "  " << to_string(static_cast<Strategy>(i)) << ": " << result.emitted[i]
                << '\n';
        }
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const PromptVariant variant = parse_variant(options.variant);
        const auto examples = read_examples_jsonl(options.examples, mode_of(options.strict));

        FewShotSet demos;
        if (options.shots > 0) {
            const FewShotSet& pool =
                options.demos_file ? load_demos_file(*options.demos_file) : builtin_demos();
            if (static_cast<size_t>(options.shots) > pool.size()) {
                throw Error("asked for " + std::to_string(options.shots) + " shots but only " +
                            std::to_string(pool.size()) + " demos are available");
            }
            demos.assign(pool.begin(), pool.begin() + options.shots);
        }

        EvalOptions eval;
        eval.variant = variant;
        eval.demos = demos.empty() ? nullptr : &demos;
        eval.budget_tokens = options.budget_tokens;
        eval.max_new_tokens = options.max_new_tokens;
        eval.temperature = options.temperature;
        eval.max_concurrency = options.concurrency;
        if (options.template_file) eval.template_override = read_text_file(*options.template_file);

        std::unique_ptr<GenerationClient> offline;
        if (options.mock_oracle && !options.replay) {
            auto oracle = std::make_unique<MockClient>();
            oracle->set_model_id("mock-oracle");
            PromptOptions prompt_options;
            prompt_options.budget_tokens = eval.budget_tokens;
            prompt_options.demos = eval.demos;
            prompt_options.template_override = eval.template_override;
            for (const auto& example : examples) {
                if (!example.label) {
                    throw Error("mock oracle needs labeled examples; \"" + example.id +
                                "\" has no label");
                }
                oracle->add_response(build_prompt(example, variant, prompt_options),
                                     std::string(to_string(*example.label)) + ".");
            }
            offline = std::move(oracle);
        }
        ClientStack stack =
            build_client(options.replay, options.record, options.endpoint, std::move(offline));
        if (stack.get() == nullptr) {
            throw Error("no endpoint configured; pass a base URL, --mock-oracle, or --replay");
        }
        if (!options.endpoint.model_id.empty()) eval.model_id = options.endpoint.model_id;

        const auto predictions = evaluate_batch(examples, *stack.get(), eval);
        write_predictions_jsonl(options.output, predictions);

        size_t unparsed = 0;
        size_t errors = 0;
        for (const auto& prediction : predictions) {
            if (!prediction.predicted) ++unparsed;
            if (!prediction.error.empty()) ++errors;
        }
        out << "evaluated " << predictions.size() << " examples to " << options.output.string()
            << " (unparsed: " << unparsed << ", endpoint errors: " << errors << ")\n";
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto predictions = read_predictions_jsonl(options.predictions, mode_of(options.strict));
        const auto gold = read_examples_jsonl(options.gold, mode_of(options.strict));
        const ConfusionMatrix matrix = score_predictions(predictions, gold);
        const EvalReport report = make_report(matrix);
        if (options.report_out) write_report(*options.report_out, report);

        out << "n: " << report.n << '\n';
        out << "micro-F1: " << fixed3(report.micro_f1) << '\n';
        for (AttributionLabel label : kAllLabels) {
            out << "F1[" << to_string(label)
                << "]: " << fixed3(report.f1[static_cast<size_t>(label_index(label))]) << '\n';
        }
        out << "unparsed: " << report.unparsed << '\n';
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

int cmd_export(const ExportOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto examples = read_examples_jsonl(options.input, mode_of(options.strict));
        if (options.format == "plain") {
            write_examples_jsonl(options.output, examples);
        } else if (options.format == "instruction_tuning") {
            std::vector<nlohmann::json> rows;
            rows.reserve(examples.size());
            for (const auto& example : examples) {
                if (!example.label) {
                    throw Error("instruction_tuning export needs labels; \"" + example.id +
                                "\" has none");
                }
                nlohmann::json row;
                row["instruction"] = std::string(variant_instruction(PromptVariant::Attribution));
                row["input"] =
                    "Claim: " + prompt_claim(example) + "\n\nContext: " + example.reference;
                row["output"] = std::string(to_string(*example.label));
                rows.push_back(std::move(row));
            }
            write_jsonl(options.output, rows);
        } else {
            throw Error("unknown export format \"" + options.format +
                        "\"; expected instruction_tuning or plain");
        }
        out << "exported " << examples.size() << " examples to " << options.output.string()
            << '\n';
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

namespace {

/// Seeded order-preserving pick of `want` indices out of `pool`.
std::vector<size_t> pick_indices(std::vector<size_t> pool, size_t want, Rng& rng) {
    for (size_t i = 0; i + 1 < pool.size(); ++i) {
        const size_t j = i + rng.pick_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(want, pool.size()));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

int cmd_sample(const SampleOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto examples = read_examples_jsonl(options.input, mode_of(options.strict));
        std::vector<size_t> chosen;
        if (options.n >= examples.size()) {
            chosen.resize(examples.size());
            for (size_t i = 0; i < examples.size(); ++i) chosen[i] = i;
        } else if (!options.stratified) {
            std::vector<size_t> pool(examples.size());
            for (size_t i = 0; i < pool.size(); ++i) pool[i] = i;
            Rng rng = Rng::derive(options.seed, "sample");
            chosen = pick_indices(std::move(pool), options.n, rng);
        } else {
            // Quotas proportional to stratum size, leftovers by largest
            // remainder, overflow spilled to other strata in label order.
            std::map<std::string, std::vector<size_t>> strata;
            for (size_t i = 0; i < examples.size(); ++i) {
                const std::string key =
                    examples[i].label ? std::string(to_string(*examples[i].label)) : "unlabeled";
                strata[key].push_back(i);
            }
            const double total = static_cast<double>(examples.size());
            std::vector<std::pair<std::string, size_t>> quotas;
            std::vector<std::pair<double, std::string>> remainders;
            size_t assigned = 0;
            for (const auto& [key, indices] : strata) {
                const double exact =
                    static_cast<double>(options.n) * static_cast<double>(indices.size()) / total;
                const size_t quota = std::min(indices.size(), static_cast<size_t>(exact));
                quotas.emplace_back(key, quota);
                remainders.emplace_back(exact - static_cast<double>(quota), key);
                assigned += quota;
            }
            std::sort(remainders.rbegin(), remainders.rend());
            while (assigned < options.n) {
                bool grew = false;
                for (const auto& [fraction, key] : remainders) {
                    if (assigned == options.n) break;
                    for (auto& [quota_key, quota] : quotas) {
                        if (quota_key == key && quota < strata[key].size()) {
                            ++quota;
                            ++assigned;
                            grew = true;
                            break;
                        }
                    }
                }
                if (!grew) break;  // every stratum exhausted
            }
            for (const auto& [key, quota] : quotas) {
                Rng rng = Rng::derive(options.seed, "stratum/" + key);
                for (size_t index : pick_indices(strata[key], quota, rng)) {
                    chosen.push_back(index);
                }
            }
            std::sort(chosen.begin(), chosen.end());
        }

        std::vector<AttributionExample> sampled;
        sampled.reserve(chosen.size());
        for (size_t index : chosen) sampled.push_back(examples[index]);
        write_examples_jsonl(options.output, sampled);
        out << "sampled " << sampled.size() << " of " << examples.size() << " examples to "
            << options.output.string() << '\n';
        return 0;
    } catch (const std::exception& ex) {
        return fail(err, ex);
    }
}

std::string version_text() {
    std::string text = "attreval ";
    text += kToolVersion;
    text += "\ndataset-format: " + std::to_string(kDatasetFormatVersion);
    text += "\nprediction-format: " + std::to_string(kPredictionFormatVersion);
    text += "\nreport-format: " + std::to_string(kReportFormatVersion);
    text += "\nindex-format: " + std::to_string(kIndexFormatVersion);
    return text;
}

void print_version(std::ostream& out) { out << version_text() << '\n'; }

}  // namespace attreval
