#include <doctest.h>

#include <string>
#include <vector>

#include "attreval/errors.hpp"
#include "attreval/jsonl.hpp"
#include "attreval/prompts.hpp"
#include "attreval/tokenize.hpp"
#include "support/temp_dir.hpp"

using namespace attreval;

namespace {

AttributionExample sample_example() {
    AttributionExample example;
    example.id = "ex-1";
    example.query = "When did the bridge open?";
    example.answer = "The bridge opened in 1932.";
    example.reference = "The Sydney Harbour Bridge opened on 19 March 1932.";
    return example;
}

const std::string kResponseMarker = "### Response:";

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("the judge instruction spells out the three-way scheme verbatim") {
    CHECK(variant_instruction(PromptVariant::Attribution) ==
          "As an Attribution Validator, your task is to verify whether a given context can "
          "support the claim. A claim can be either a plain sentence or a question followed by "
          "its answer. Specifically, your response should clearly indicate the relationship: "
          "Attributable, Contradictory or Extrapolatory. A contradictory error occurs when you "
          "can infer that the answer contradicts the fact presented in the context, while an "
          "extrapolatory error means that you cannot infer the correctness of the answer based "
          "on the information provided in the context.");
    CHECK(variant_instruction(PromptVariant::FactChecking) ==
          "Fact-check a claim based on the given evidence.\n"
          "Options: Supported, Refuted or Not Enough Information");
    CHECK(variant_instruction(PromptVariant::Nli) ==
          "Read the following and determine if the hypothesis can be inferred from the "
          "premise.\nOptions: Entailment, Contradiction, or Neutral");
    CHECK(variant_instruction(PromptVariant::Summarization) ==
          "Read the following and determine whether the source text can support the "
          "summary.\nOptions: Support, Contradicts, or Not Enough Information");
}

TEST_CASE("zero-shot prompts follow the instruction/input/response layout exactly") {
    const AttributionExample example = sample_example();
    const std::string prompt = build_prompt(example, PromptVariant::Attribution);

    const std::string expected = std::string("### Instruction:\n") +
                                 std::string(variant_instruction(PromptVariant::Attribution)) +
                                 "\n\n### Input:\nClaim: When did the bridge open? The bridge "
                                 "opened in 1932.\n\nContext: The Sydney Harbour Bridge opened "
                                 "on 19 March 1932.\n\n### Response:";
    CHECK(prompt == expected);

    // Every variant ends with the bare response marker, no trailing newline.
    for (PromptVariant variant : kAllVariants) {
        const std::string rendered = build_prompt(example, variant);
        REQUIRE(rendered.size() >= kResponseMarker.size());
        CHECK(rendered.substr(rendered.size() - kResponseMarker.size()) == kResponseMarker);
    }
}

TEST_CASE("each wording variant uses its own field labels") {
    const AttributionExample example = sample_example();

    const std::string fact = build_prompt(example, PromptVariant::FactChecking);
    CHECK(fact.find("Claim: When did") != std::string::npos);
    CHECK(fact.find("Evidence: The Sydney") != std::string::npos);

    const std::string nli = build_prompt(example, PromptVariant::Nli);
    CHECK(nli.find("Hypothesis: When did") != std::string::npos);
    CHECK(nli.find("Premise: The Sydney") != std::string::npos);

    const std::string summ = build_prompt(example, PromptVariant::Summarization);
    CHECK(summ.find("Summary: When did") != std::string::npos);
    CHECK(summ.find("Source: The Sydney") != std::string::npos);
}

TEST_CASE("prompt_claim joins query and answer with one space") {
    AttributionExample example = sample_example();
    CHECK(prompt_claim(example) ==
          "When did the bridge open? The bridge opened in 1932.");
    example.query.clear();
    CHECK(prompt_claim(example) == "The bridge opened in 1932.");
}

TEST_CASE("three-shot prompts carry the shipped demos in order") {
    const AttributionExample example = sample_example();
    PromptOptions options;
    options.demos = &builtin_demos();
    const std::string prompt = build_prompt(example, PromptVariant::Attribution, options);

    // One response marker per demo plus the live one.
    CHECK(count_occurrences(prompt, kResponseMarker) == 4);
    CHECK(count_occurrences(prompt, "### Input:") == 4);
    CHECK(count_occurrences(prompt, "\n\n-\n\n") == 3);
    CHECK(prompt.find("Here are some demonstration examples for you.") != std::string::npos);
    CHECK(prompt.find("Now here is the example that needs your response:") != std::string::npos);

    // Demo order: Attributable, then Contradictory, then Extrapolatory.
    const size_t first = prompt.find("Mazeppa");
    const size_t second = prompt.find("Mar del Plata");
    const size_t third = prompt.find("Louis Joseph");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    REQUIRE(third != std::string::npos);
    CHECK(first < second);
    CHECK(second < third);

    // The live input comes after every demo and ends the prompt.
    const size_t live = prompt.rfind("### Input:");
    CHECK(live > third);
    CHECK(prompt.find("When did the bridge open?", live) != std::string::npos);
    CHECK(prompt.substr(prompt.size() - kResponseMarker.size()) == kResponseMarker);

    // The instruction block still leads.
    CHECK(prompt.rfind("### Instruction:", 0) == 0);
    CHECK(prompt.find("Here are some demonstration examples") >
          prompt.find("Attribution Validator"));
}

TEST_CASE("demo fixtures round-trip through render and parse") {
    const FewShotSet& demos = builtin_demos();
    REQUIRE(demos.size() == 3);
    CHECK(demos[0].response.rfind("Attributable.", 0) == 0);
    CHECK(demos[1].response.rfind("Contradictory.", 0) == 0);
    CHECK(demos[2].response.rfind("Extrapolatory.", 0) == 0);
    CHECK(demos[0].input.rfind("Claim:", 0) == 0);
    CHECK(demos[0].input.find("Reference:") != std::string::npos);

    const std::string rendered = render_demos(demos);
    const FewShotSet parsed = parse_demos(rendered);
    CHECK(parsed == demos);

    CHECK_THROWS_AS(parse_demos("no markers at all"), FormatError);
    CHECK_THROWS_AS(parse_demos("### Response:\nbackwards\n### Input:\nnope"), FormatError);
}

TEST_CASE("shipped resource files match the embedded templates byte for byte") {
    for (PromptVariant variant : kAllVariants) {
        const auto path = testsupport::resource_dir() / "prompts" /
                          (std::string(to_string(variant)) + ".txt");
        CAPTURE(path.string());
        CHECK(read_text_file(path) == variant_template(variant));
    }
    const FewShotSet from_file =
        load_demos_file(testsupport::resource_dir() / "demos" / "default.txt");
    CHECK(from_file == builtin_demos());
}

TEST_CASE("over-budget prompts lose reference tail first") {
    AttributionExample example = sample_example();
    std::string reference;
    for (int i = 1; i <= 50; ++i) {
        if (i > 1) reference += ' ';
        reference += "word" + std::to_string(i);
    }
    example.reference = reference;

    // Measure the fixed cost: the same prompt with an empty reference.
    AttributionExample empty_ref = example;
    empty_ref.reference.clear();
    const size_t base = count_ws_tokens(build_prompt(empty_ref, PromptVariant::Attribution));

    PromptOptions options;
    options.budget_tokens = base + 10;
    const std::string prompt = build_prompt(example, PromptVariant::Attribution, options);
    CHECK(count_ws_tokens(prompt) == base + 10);
    CHECK(prompt.find("word10") != std::string::npos);
    CHECK(prompt.find("word11") == std::string::npos);

    // The exact render equals an untruncated prompt over the kept prefix.
    AttributionExample kept = example;
    kept.reference = reference.substr(0, reference.find(" word11"));
    CHECK(prompt == build_prompt(kept, PromptVariant::Attribution));

    // An ample budget changes nothing.
    PromptOptions roomy;
    roomy.budget_tokens = base + 500;
    CHECK(build_prompt(example, PromptVariant::Attribution, roomy) ==
          build_prompt(example, PromptVariant::Attribution));
}

TEST_CASE("over-budget prompts drop demos last-first once the reference is gone") {
    AttributionExample example = sample_example();
    const FewShotSet& demos = builtin_demos();

    PromptOptions zero_shot_options;
    AttributionExample empty_ref = example;
    empty_ref.reference.clear();
    const size_t zero_base = count_ws_tokens(build_prompt(empty_ref, PromptVariant::Attribution));

    // Room for the zero-shot prompt plus the whole reference but nowhere near
    // the demos: all demos must vanish, the reference must survive.
    const size_t reference_tokens = count_ws_tokens(example.reference);
    PromptOptions options;
    options.demos = &demos;
    options.budget_tokens = zero_base + reference_tokens;
    const std::string prompt = build_prompt(example, PromptVariant::Attribution, options);
    CHECK(prompt == build_prompt(example, PromptVariant::Attribution));
    CHECK(prompt.find("demonstration") == std::string::npos);

    // A budget just under the three-shot fixed cost keeps exactly two demos.
    FewShotSet small = {{"Claim: a\n\nReference: b", "Attributable."},
                        {"Claim: c\n\nReference: d", "Contradictory."},
                        {"Claim: e\n\nReference: f", "Extrapolatory."}};
    PromptOptions all_three_empty;
    all_three_empty.demos = &small;
    const size_t three_shot_base =
        count_ws_tokens(build_prompt(empty_ref, PromptVariant::Attribution, all_three_empty));

    PromptOptions two_of_three;
    two_of_three.demos = &small;
    two_of_three.budget_tokens = three_shot_base - 1;
    const std::string trimmed =
        build_prompt(example, PromptVariant::Attribution, two_of_three);
    CHECK(count_occurrences(trimmed, kResponseMarker) == 3);  // two demos + live
    CHECK(trimmed.find("Claim: a") != std::string::npos);
    CHECK(trimmed.find("Claim: c") != std::string::npos);
    CHECK(trimmed.find("Claim: e") == std::string::npos);
    // The reference was backfilled after the drop.
    CHECK(trimmed.find(example.reference) != std::string::npos);
}

TEST_CASE("a budget too small for instruction and claim raises") {
    const AttributionExample example = sample_example();
    PromptOptions options;
    options.budget_tokens = 3;
    CHECK_THROWS_AS(build_prompt(example, PromptVariant::Attribution, options), BudgetError);
}

TEST_CASE("template overrides are validated and honored") {
    const AttributionExample example = sample_example();

    PromptOptions custom;
    custom.template_override = "Judge: {claim}\nUsing: {context}\nVerdict:";
    const std::string prompt = build_prompt(example, PromptVariant::Attribution, custom);
    CHECK(prompt == "Judge: When did the bridge open? The bridge opened in 1932.\n"
                    "Using: The Sydney Harbour Bridge opened on 19 March 1932.\nVerdict:");

    PromptOptions missing_claim;
    missing_claim.template_override = "Only {context} here";
    CHECK_THROWS_AS(build_prompt(example, PromptVariant::Attribution, missing_claim), Error);

    PromptOptions two_contexts;
    two_contexts.template_override = "{claim} {context} {context}";
    CHECK_THROWS_AS(build_prompt(example, PromptVariant::Attribution, two_contexts), Error);

    // Demos need an input marker to attach to.
    PromptOptions demo_no_marker;
    demo_no_marker.template_override = "{claim} {context}";
    demo_no_marker.demos = &builtin_demos();
    CHECK_THROWS_AS(build_prompt(example, PromptVariant::Attribution, demo_no_marker), Error);

    // Substituted text is never rescanned for placeholders.
    AttributionExample sneaky = sample_example();
    sneaky.answer = "{context}";
    sneaky.query.clear();
    PromptOptions plain;
    const std::string rendered = build_prompt(sneaky, PromptVariant::Attribution, plain);
    CHECK(rendered.find("{context}") != std::string::npos);
    CHECK(count_occurrences(rendered, sneaky.reference) == 1);
}

TEST_CASE("parse_variant accepts the four names case-insensitively") {
    CHECK(parse_variant("attribution") == PromptVariant::Attribution);
    CHECK(parse_variant("FACT_CHECKING") == PromptVariant::FactChecking);
    CHECK(parse_variant("Nli") == PromptVariant::Nli);
    CHECK(parse_variant("summarization") == PromptVariant::Summarization);
    CHECK_THROWS_AS(parse_variant("qa"), Error);
}
