#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "attreval/bm25.hpp"
#include "attreval/commands.hpp"
#include "attreval/example.hpp"
#include "attreval/jsonl.hpp"
#include "attreval/metrics.hpp"
#include "attreval/prediction.hpp"
#include "attreval/prompts.hpp"
#include "support/temp_dir.hpp"

using namespace attreval;
using testsupport::TempDir;

namespace {

struct CommandIo {
    std::ostringstream out;
    std::ostringstream err;
};

AttributionExample labeled(std::string id, AttributionLabel label) {
    AttributionExample example;
    example.id = std::move(id);
    example.query = "When did the " + example.id + " bridge open?";
    example.answer = "It opened in 1932.";
    example.reference = "The " + example.id + " bridge opened on 19 March 1932.";
    example.label = label;
    example.source = "unit";
    return example;
}

std::vector<AttributionExample> three_labeled() {
    return {labeled("alpha", AttributionLabel::Attributable),
            labeled("beta", AttributionLabel::Contradictory),
            labeled("gamma", AttributionLabel::Extrapolatory)};
}

}  // namespace

TEST_CASE("version text lists the tool and format versions") {
    CHECK(version_text() ==
          "attreval 0.1.0\n"
          "dataset-format: 1\n"
          "prediction-format: 1\n"
          "report-format: 1\n"
          "index-format: 1");
    std::ostringstream out;
    print_version(out);
    CHECK(out.str() == version_text() + "\n");
}

TEST_CASE("repurpose command converts a source file end to end") {
    TempDir dir;
    const auto input = dir.file("fever.jsonl");
    write_text_file(
        input,
        R"({"id": "1", "claim": "A claim.", "evidence": "Some evidence.", "label": "SUPPORTS"})"
        "\n"
        R"({"id": "2", "claim": "Another.", "evidence": "More evidence.", "label": "REFUTES"})"
        "\n"
        R"({"id": "3", "claim": "Odd one.", "evidence": "", "label": "SUPPORTS"})"
        "\n");
    RepurposeOptions options;
    options.dataset = "fever";
    options.input = input;
    options.output = dir.file("examples.jsonl");
    options.drop_report = dir.file("drops.jsonl");

    CommandIo io;
    CHECK(cmd_repurpose(options, io.out, io.err) == 0);
    CHECK(io.out.str() == "wrote 2 examples to " + options.output.string() + " (1 dropped)\n");
    CHECK(io.err.str().empty());

    auto examples = read_examples_jsonl(options.output, IoMode::Strict);
    REQUIRE(examples.size() == 2);
    CHECK(examples[0].id == "fever-1");
    CHECK(examples[0].label == AttributionLabel::Attributable);
    auto drops = read_drop_report(*options.drop_report);
    REQUIRE(drops.size() == 1);
    CHECK(drops[0].reason == "empty evidence");
}

TEST_CASE("repurpose command reports bad datasets as errors") {
    TempDir dir;
    RepurposeOptions options;
    options.dataset = "unheard_of";
    options.input = dir.file("missing.jsonl");
    options.output = dir.file("out.jsonl");
    CommandIo io;
    CHECK(cmd_repurpose(options, io.out, io.err) == 1);
    CHECK(io.out.str().empty());
    CHECK(io.err.str().substr(0, 7) == "error: ");
    CHECK(io.err.str().find("unknown dataset") != std::string::npos);
}

TEST_CASE("index command builds a searchable artifact") {
    TempDir dir;
    const auto corpus = dir.file("corpus.jsonl");
    write_text_file(corpus,
                    R"({"doc_id": "d1", "text": "a red apple on the table"})"
                    "\n"
                    R"({"doc_id": "d2", "text": "the apple pie recipe uses red apple"})"
                    "\n"
                    R"({"doc_id": "d3", "text": "blue sky over the sea"})"
                    "\n");
    IndexOptions options;
    options.corpus = corpus;
    options.output = dir.file("passages.idx");
    CommandIo io;
    CHECK(cmd_index(options, io.out, io.err) == 0);
    CHECK(io.out.str() == "indexed 3 passages to " + options.output.string() + "\n");

    const Bm25Index index = Bm25Index::load(options.output);
    auto hits = index.search("red apple", 3);
    REQUIRE(!hits.empty());
    CHECK(hits[0].passage.doc_id == "d2");
}

TEST_CASE("index command fails cleanly on a missing corpus") {
    TempDir dir;
    IndexOptions options;
    options.corpus = dir.file("absent.jsonl");
    options.output = dir.file("out.idx");
    CommandIo io;
    CHECK(cmd_index(options, io.out, io.err) == 1);
    CHECK(io.err.str().substr(0, 7) == "error: ");
}

TEST_CASE("simulate command manufactures examples offline and deterministically") {
    TempDir dir;
    const auto qa = dir.file("qa.jsonl");
    std::string rows;
    for (int i = 0; i < 12; ++i) {
        const std::string n = std::to_string(i);
        rows += R"({"id": "q)" + n + R"(", "question": "What color is item )" + n +
                R"( in the catalog?", "answers": ["azure )" + n +
                R"("], "positive_context": "Item )" + n + R"( is painted azure )" + n +
                R"( according to the catalog."})" + "\n";
    }
    write_text_file(qa, rows);

    std::string corpus_rows;
    for (int i = 0; i < 12; ++i) {
        const std::string n = std::to_string(i);
        corpus_rows += R"({"doc_id": "pos-)" + n + R"(", "text": "Item )" + n +
                       R"( is painted azure )" + n + R"( according to the catalog."})" + "\n";
        corpus_rows += R"({"doc_id": "neg-)" + n + R"(", "text": "Item )" + n +
                       R"( has a matte finish and a long catalog entry."})" + "\n";
    }
    const auto corpus = dir.file("corpus.jsonl");
    write_text_file(corpus, corpus_rows);

    IndexOptions index_options;
    index_options.corpus = corpus;
    index_options.output = dir.file("passages.idx");
    CommandIo index_io;
    REQUIRE(cmd_index(index_options, index_io.out, index_io.err) == 0);

    SimulateOptions options;
    options.qa = qa;
    options.output = dir.file("simulated.jsonl");
    options.index_path = index_options.output;
    options.drop_report = dir.file("drops.jsonl");
    options.mock_substituter = true;
    options.config.seed = 13;

    CommandIo io;
    REQUIRE(cmd_simulate(options, io.out, io.err) == 0);
    const std::string text = io.out.str();
    CHECK(text.find("simulated ") == 0);
    CHECK(text.find("  attributable: ") != std::string::npos);
    CHECK(text.find("  contradictory_answer_swap: ") != std::string::npos);
    CHECK(text.find("  contradictory_context_swap: ") != std::string::npos);
    CHECK(text.find("  extrapolatory: ") != std::string::npos);

    auto examples = read_examples_jsonl(options.output, IoMode::Strict);
    auto drops = read_drop_report(*options.drop_report);
    CHECK(examples.size() + drops.size() == 12);
    for (const auto& example : examples) CHECK(example.label.has_value());

    SimulateOptions rerun = options;
    rerun.output = dir.file("simulated2.jsonl");
    CommandIo rerun_io;
    REQUIRE(cmd_simulate(rerun, rerun_io.out, rerun_io.err) == 0);
    CHECK(read_text_file(rerun.output) == read_text_file(options.output));
}

TEST_CASE("simulate command requires a generator for swap strategies") {
    TempDir dir;
    const auto qa = dir.file("qa.jsonl");
    write_text_file(
        qa, R"({"id": "1", "question": "Who?", "answers": ["Ada"], "positive_context": "Ada."})"
            "\n");
    SimulateOptions options;
    options.qa = qa;
    options.output = dir.file("out.jsonl");
    CommandIo io;
    CHECK(cmd_simulate(options, io.out, io.err) == 1);
    CHECK(io.err.str().substr(0, 7) == "error: ");
}

TEST_CASE("evaluate and score commands close the loop with a mock oracle") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());

    EvaluateOptions evaluate;
    evaluate.examples = gold_path;
    evaluate.output = dir.file("predictions.jsonl");
    evaluate.mock_oracle = true;
    CommandIo io;
    REQUIRE(cmd_evaluate(evaluate, io.out, io.err) == 0);
    CHECK(io.out.str() == "evaluated 3 examples to " + evaluate.output.string() +
                              " (unparsed: 0, endpoint errors: 0)\n");

    auto predictions = read_predictions_jsonl(evaluate.output, IoMode::Strict);
    REQUIRE(predictions.size() == 3);
    CHECK(predictions[0].predicted == AttributionLabel::Attributable);
    CHECK(predictions[0].model_id == "mock-oracle");

    ScoreOptions score;
    score.predictions = evaluate.output;
    score.gold = gold_path;
    score.report_out = dir.file("report.json");
    CommandIo score_io;
    REQUIRE(cmd_score(score, score_io.out, score_io.err) == 0);
    CHECK(score_io.out.str().find("micro-F1: 1.000\n") != std::string::npos);

    const EvalReport report = read_report(*score.report_out);
    CHECK(report.n == 3);
    CHECK(report.micro_f1 == 1.0);
}

TEST_CASE("evaluate command records a cassette that replays byte-identically") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());

    EvaluateOptions record;
    record.examples = gold_path;
    record.output = dir.file("live.jsonl");
    record.mock_oracle = true;
    record.record = dir.file("cassette.jsonl");
    CommandIo record_io;
    REQUIRE(cmd_evaluate(record, record_io.out, record_io.err) == 0);

    EvaluateOptions replay;
    replay.examples = gold_path;
    replay.output = dir.file("replayed.jsonl");
    replay.replay = record.record;  // replay wins even with the oracle flag set
    replay.mock_oracle = true;
    CommandIo replay_io;
    REQUIRE(cmd_evaluate(replay, replay_io.out, replay_io.err) == 0);

    CHECK(read_text_file(replay.output) == read_text_file(record.output));
}

TEST_CASE("evaluate command refuses to run without any endpoint") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());
    EvaluateOptions options;
    options.examples = gold_path;
    options.output = dir.file("predictions.jsonl");
    CommandIo io;
    CHECK(cmd_evaluate(options, io.out, io.err) == 1);
    CHECK(io.err.str() ==
          "error: no endpoint configured; pass a base URL, --mock-oracle, or --replay\n");
}

TEST_CASE("evaluate command lists the variants on a bad name") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());
    EvaluateOptions options;
    options.examples = gold_path;
    options.output = dir.file("predictions.jsonl");
    options.variant = "vibes";
    options.mock_oracle = true;
    CommandIo io;
    CHECK(cmd_evaluate(options, io.out, io.err) == 1);
    CHECK(io.err.str().find("attribution, fact_checking, nli, summarization") !=
          std::string::npos);
}

TEST_CASE("the mock oracle refuses unlabeled examples") {
    TempDir dir;
    auto examples = three_labeled();
    examples[1].label.reset();
    const auto path = dir.file("examples.jsonl");
    write_examples_jsonl(path, examples);
    EvaluateOptions options;
    options.examples = path;
    options.output = dir.file("predictions.jsonl");
    options.mock_oracle = true;
    CommandIo io;
    CHECK(cmd_evaluate(options, io.out, io.err) == 1);
    CHECK(io.err.str().find("mock oracle needs labeled examples") != std::string::npos);
    CHECK(io.err.str().find("\"beta\"") != std::string::npos);
}

TEST_CASE("score command prints the fixture report values") {
    TempDir dir;
    std::vector<AttributionExample> gold;
    std::vector<Prediction> predictions;
    auto add = [&](const std::string& id, AttributionLabel truth,
                   std::optional<AttributionLabel> predicted) {
        gold.push_back(labeled(id, truth));
        Prediction prediction;
        prediction.example_id = id;
        prediction.predicted = predicted;
        prediction.raw_response = "canned";
        predictions.push_back(prediction);
    };
    const auto kA = AttributionLabel::Attributable;
    const auto kC = AttributionLabel::Contradictory;
    const auto kE = AttributionLabel::Extrapolatory;
    add("g0", kA, kA);
    add("g1", kA, kA);
    add("g2", kA, kA);
    add("g3", kA, kE);
    add("g4", kC, kC);
    add("g5", kC, kC);
    add("g6", kC, kA);
    add("g7", kE, kE);
    add("g8", kE, kE);
    add("g9", kE, std::nullopt);

    const auto gold_path = dir.file("gold.jsonl");
    const auto prediction_path = dir.file("predictions.jsonl");
    write_examples_jsonl(gold_path, gold);
    write_predictions_jsonl(prediction_path, predictions);

    ScoreOptions options;
    options.predictions = prediction_path;
    options.gold = gold_path;
    CommandIo io;
    REQUIRE(cmd_score(options, io.out, io.err) == 0);
    CHECK(io.out.str() ==
          "n: 10\n"
          "micro-F1: 0.700\n"
          "F1[Attributable]: 0.750\n"
          "F1[Contradictory]: 0.800\n"
          "F1[Extrapolatory]: 0.667\n"
          "unparsed: 1\n");
}

TEST_CASE("score command rejects an empty prediction file") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());
    const auto prediction_path = dir.file("predictions.jsonl");
    write_text_file(prediction_path, "");

    ScoreOptions options;
    options.predictions = prediction_path;
    options.gold = gold_path;
    CommandIo io;
    CHECK(cmd_score(options, io.out, io.err) == 1);
    CHECK(io.err.str().find("no scored pairs") != std::string::npos);
}

TEST_CASE("score command surfaces missing gold ids as errors") {
    TempDir dir;
    const auto gold_path = dir.file("gold.jsonl");
    write_examples_jsonl(gold_path, three_labeled());
    Prediction stray;
    stray.example_id = "unknown-id";
    stray.predicted = AttributionLabel::Attributable;
    const auto prediction_path = dir.file("predictions.jsonl");
    write_predictions_jsonl(prediction_path, {&stray, 1});

    ScoreOptions options;
    options.predictions = prediction_path;
    options.gold = gold_path;
    CommandIo io;
    CHECK(cmd_score(options, io.out, io.err) == 1);
    CHECK(io.err.str().find("unknown-id") != std::string::npos);
}

TEST_CASE("export command writes instruction-tuning rows") {
    TempDir dir;
    const auto input = dir.file("examples.jsonl");
    write_examples_jsonl(input, three_labeled());

    ExportOptions options;
    options.input = input;
    options.output = dir.file("tuning.jsonl");
    CommandIo io;
    REQUIRE(cmd_export(options, io.out, io.err) == 0);
    CHECK(io.out.str() == "exported 3 examples to " + options.output.string() + "\n");

    auto rows = read_jsonl(options.output);
    REQUIRE(rows.size() == 3);
    const auto& row = rows[0];
    CHECK(row.at("instruction").get<std::string>() ==
          std::string(variant_instruction(PromptVariant::Attribution)));
    CHECK(row.at("input").get<std::string>() ==
          "Claim: When did the alpha bridge open? It opened in 1932.\n\n"
          "Context: The alpha bridge opened on 19 March 1932.");
    CHECK(row.at("output").get<std::string>() == "Attributable");
    CHECK(rows[1].at("output").get<std::string>() == "Contradictory");
}

TEST_CASE("export command round-trips plain format losslessly") {
    TempDir dir;
    const auto input = dir.file("examples.jsonl");
    const auto examples = three_labeled();
    write_examples_jsonl(input, examples);

    ExportOptions options;
    options.input = input;
    options.output = dir.file("copy.jsonl");
    options.format = "plain";
    CommandIo io;
    REQUIRE(cmd_export(options, io.out, io.err) == 0);
    CHECK(read_examples_jsonl(options.output, IoMode::Strict) == examples);
}

TEST_CASE("export command validates formats and labels") {
    TempDir dir;
    const auto input = dir.file("examples.jsonl");
    auto examples = three_labeled();
    examples[2].label.reset();
    write_examples_jsonl(input, examples);

    ExportOptions unlabeled;
    unlabeled.input = input;
    unlabeled.output = dir.file("tuning.jsonl");
    CommandIo io;
    CHECK(cmd_export(unlabeled, io.out, io.err) == 1);
    CHECK(io.err.str().find("needs labels") != std::string::npos);

    ExportOptions bad_format = unlabeled;
    bad_format.format = "parquet";
    CommandIo bad_io;
    CHECK(cmd_export(bad_format, bad_io.out, bad_io.err) == 1);
    CHECK(bad_io.err.str().find("unknown export format \"parquet\"") != std::string::npos);
}

TEST_CASE("sample command keeps everything when the ask covers the file") {
    TempDir dir;
    const auto input = dir.file("examples.jsonl");
    const auto examples = three_labeled();
    write_examples_jsonl(input, examples);

    SampleOptions options;
    options.input = input;
    options.output = dir.file("sampled.jsonl");
    options.n = 10;
    CommandIo io;
    REQUIRE(cmd_sample(options, io.out, io.err) == 0);
    CHECK(io.out.str() == "sampled 3 of 3 examples to " + options.output.string() + "\n");
    CHECK(read_examples_jsonl(options.output, IoMode::Strict) == examples);
}

TEST_CASE("sampling is seeded, order-preserving, and sensitive to the seed") {
    TempDir dir;
    std::vector<AttributionExample> examples;
    for (int i = 0; i < 30; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "s%02d", i);
        examples.push_back(labeled(id, AttributionLabel::Attributable));
    }
    const auto input = dir.file("examples.jsonl");
    write_examples_jsonl(input, examples);

    SampleOptions options;
    options.input = input;
    options.output = dir.file("a.jsonl");
    options.n = 5;
    options.seed = 1;
    CommandIo io_a;
    REQUIRE(cmd_sample(options, io_a.out, io_a.err) == 0);
    auto first = read_examples_jsonl(options.output, IoMode::Strict);
    REQUIRE(first.size() == 5);
    for (size_t i = 1; i < first.size(); ++i) {
        CHECK(first[i - 1].id < first[i].id);  // input order preserved
    }

    options.output = dir.file("b.jsonl");
    CommandIo io_b;
    REQUIRE(cmd_sample(options, io_b.out, io_b.err) == 0);
    CHECK(read_text_file(dir.file("a.jsonl")) == read_text_file(dir.file("b.jsonl")));

    options.output = dir.file("c.jsonl");
    options.seed = 2;
    CommandIo io_c;
    REQUIRE(cmd_sample(options, io_c.out, io_c.err) == 0);
    CHECK(read_examples_jsonl(options.output, IoMode::Strict) != first);
}

TEST_CASE("stratified sampling keeps label proportions") {
    TempDir dir;
    std::vector<AttributionExample> examples;
    for (int i = 0; i < 30; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "s%02d", i);
        const AttributionLabel label = i < 15 ? AttributionLabel::Attributable
                                      : i < 24 ? AttributionLabel::Contradictory
                                               : AttributionLabel::Extrapolatory;
        examples.push_back(labeled(id, label));
    }
    const auto input = dir.file("examples.jsonl");
    write_examples_jsonl(input, examples);

    SampleOptions options;
    options.input = input;
    options.output = dir.file("sampled.jsonl");
    options.n = 10;
    options.seed = 3;
    options.stratified = true;
    CommandIo io;
    REQUIRE(cmd_sample(options, io.out, io.err) == 0);
    auto sampled = read_examples_jsonl(options.output, IoMode::Strict);
    REQUIRE(sampled.size() == 10);
    size_t per_label[3] = {0, 0, 0};
    for (const auto& example : sampled) {
        ++per_label[static_cast<size_t>(label_index(*example.label))];
    }
    CHECK(per_label[0] == 5);  // 15/30 of 10
    CHECK(per_label[1] == 3);  // 9/30 of 10
    CHECK(per_label[2] == 2);  // 6/30 of 10
}

TEST_CASE("stratified sampling over balanced labels stays within one") {
    TempDir dir;
    std::vector<AttributionExample> examples;
    for (int i = 0; i < 30; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "s%02d", i);
        const auto label = static_cast<AttributionLabel>(i % 3);
        examples.push_back(labeled(id, label));
    }
    const auto input = dir.file("examples.jsonl");
    write_examples_jsonl(input, examples);

    SampleOptions options;
    options.input = input;
    options.output = dir.file("sampled.jsonl");
    options.n = 10;  // not divisible by three strata
    options.seed = 4;
    options.stratified = true;
    CommandIo io;
    REQUIRE(cmd_sample(options, io.out, io.err) == 0);
    auto sampled = read_examples_jsonl(options.output, IoMode::Strict);
    REQUIRE(sampled.size() == 10);
    size_t per_label[3] = {0, 0, 0};
    for (const auto& example : sampled) {
        ++per_label[static_cast<size_t>(label_index(*example.label))];
    }
    for (size_t count : per_label) {
        CHECK(count >= 3);
        CHECK(count <= 4);
    }
}
