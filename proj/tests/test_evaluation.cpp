#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "imclass/evaluation.hpp"
#include "support/synthetic.hpp"

using namespace imclass;

namespace {

EvalParams default_params(int folds = 2, std::uint64_t seed = 17) {
    EvalParams p;
    p.spec = {KernelKind::rbf, 1.0};
    p.train.C = 10.0;
    p.n_folds = folds;
    p.seed = seed;
    return p;
}

std::set<int> label_set(const DataView& view) {
    std::set<int> out;
    for (std::size_t i = 0; i < view.size(); ++i) out.insert(view.get(i).label);
    return out;
}

}  // namespace

TEST_CASE("confusion matrix bookkeeping") {
    ConfusionMatrix m({3, 1, 2});
    m.add(1, 1);
    m.add(1, 2);
    m.add(2, 2);
    m.add(3, 1);
    CHECK(m.classes() == std::vector<int>{1, 2, 3});
    CHECK(m.count(1, 1) == 1);
    CHECK(m.count(1, 2) == 1);
    CHECK(m.count(3, 1) == 1);
    CHECK(m.class_total(1) == 2);
    CHECK(m.total() == 4);
    CHECK(m.off_diagonal() == 2);
    CHECK_THROWS(m.add(5, 1));
}

TEST_CASE("cross validation on separable clusters reaches zero error") {
    const auto examples = synthetic::clusters(3, 16, 99);
    const CrossValResult result = cross_validate(view_base(examples), default_params());

    const EvalReport& r = result.report;
    CHECK(r.total_error_pct == 0.0);
    CHECK(r.confusion.off_diagonal() == 0);
    CHECK(r.confusion.total() == 48);
    CHECK(r.fold_errors_pct.size() == 2);
    CHECK(r.min_error_pct <= r.total_error_pct);
    CHECK(r.total_error_pct <= r.max_error_pct);
    CHECK(r.warnings.empty());

    // The returned bundle classifies raw (unscaled) features.
    for (const Example& e : examples)
        REQUIRE(result.last_fold_model.predict_label(e.features) == e.label);
}

TEST_CASE("contradictory duplicated points create irreducible error") {
    auto examples = synthetic::clusters(2, 10, 5);
    Example dup = examples.front();
    dup.id = 100;
    dup.label = examples.front().label == 0 ? 1 : 0;  // same features, other class
    examples.push_back(dup);

    const CrossValResult result = cross_validate(view_base(examples), default_params(2, 3));
    const double n = static_cast<double>(examples.size());
    CHECK(result.report.total_error_pct >= 100.0 / n - 1e-9);
}

TEST_CASE("every class needs enough examples for the folds") {
    auto examples = synthetic::clusters(2, 5, 8);
    Example lone;
    lone.features = examples.front().features;
    lone.features[0] += 10.0;
    lone.label = 7;
    lone.id = 999;
    examples.push_back(lone);
    try {
        cross_validate(view_base(examples), default_params(2, 1));
        FAIL("expected an exception");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("class 7") != std::string::npos);
    }
}

TEST_CASE("reports are deterministic for a fixed seed") {
    const auto examples = synthetic::clusters(3, 8, 123);
    const EvalParams params = default_params(2, 77);
    const CrossValResult a = cross_validate(view_base(examples), params);
    const CrossValResult b = cross_validate(view_base(examples), params);
    CHECK(format_report(a.report) == format_report(b.report));
    CHECK(report_to_json(a.report) == report_to_json(b.report));
}

TEST_CASE("error rate ties out with the confusion matrix") {
    auto examples = synthetic::clusters(3, 8, 321, 2.0, 1.2);  // noisier clusters
    const CrossValResult result = cross_validate(view_base(examples), default_params(2, 5));
    const EvalReport& r = result.report;
    CHECK(r.confusion.total() == static_cast<long long>(examples.size()));
    const double recomputed =
        100.0 * static_cast<double>(r.confusion.off_diagonal()) /
        static_cast<double>(r.confusion.total());
    CHECK(r.total_error_pct == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("one-fold evaluation trains and tests on everything") {
    const auto examples = synthetic::clusters(2, 6, 2);
    const CrossValResult result = cross_validate(view_base(examples), default_params(1, 9));
    CHECK(result.report.fold_errors_pct.size() == 1);
    CHECK(result.report.confusion.total() == 12);
    CHECK(result.report.total_error_pct == 0.0);
}

TEST_CASE("simplified problem mapping") {
    // One example per class appearing in the full problem's numbering.
    std::vector<Example> examples;
    long long id = 0;
    for (int label : {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 21, 24, 25, 29})
        examples.push_back({{static_cast<double>(id)}, label, id++});
    const DataViewPtr view = view_base(examples);

    const DataViewPtr simplified = apply_simplified_problem(view);
    CHECK(label_set(*simplified) == std::set<int>{2, 3, 5, 30, 31});
    CHECK(simplified->size() == 7);  // 2,3,5 plus 1+6 and 4+7

    const DataViewPtr twice = apply_simplified_problem(simplified);
    CHECK(label_set(*twice) == std::set<int>{2, 3, 5, 30, 31});
    CHECK(twice->size() == simplified->size());

    // Merging adds up member counts.
    std::vector<Example> counted;
    id = 0;
    for (int i = 0; i < 3; ++i) counted.push_back({{0.0}, 1, id++});
    for (int i = 0; i < 2; ++i) counted.push_back({{0.0}, 6, id++});
    const DataViewPtr merged = apply_simplified_problem(view_base(counted));
    CHECK(merged->size() == 5);
    for (std::size_t i = 0; i < merged->size(); ++i) REQUIRE(merged->get(i).label == 30);
}

TEST_CASE("report formatting uses 4 decimals and a dot separator") {
    const auto examples = synthetic::clusters(2, 6, 55);
    const CrossValResult result = cross_validate(view_base(examples), default_params(2, 4));
    const std::string text = format_report(result.report);
    CHECK(text.find("total=0.0000") != std::string::npos);
    CHECK(text.find(',') == std::string::npos);
    CHECK(format_percent(12.34567) == "12.3457");
    CHECK(format_percent(0.0) == "0.0000");

    const std::string json = report_to_json(result.report);
    for (const char* key : {"total_error", "fold_errors", "confusion", "params", "warnings"})
        REQUIRE(json.find(key) != std::string::npos);
}

TEST_CASE("model bundles round-trip through their file format") {
    const auto examples = synthetic::clusters(3, 8, 4242);
    const CrossValResult result = cross_validate(view_base(examples), default_params(2, 11));
    const ModelBundle& bundle = result.last_fold_model;

    std::ostringstream first;
    save_model_bundle(first, bundle);
    std::istringstream back(first.str());
    const ModelBundle loaded = load_model_bundle(back);
    std::ostringstream second;
    save_model_bundle(second, loaded);
    CHECK(first.str() == second.str());

    for (const Example& e : examples)
        REQUIRE(loaded.predict_label(e.features) == bundle.predict_label(e.features));

    std::istringstream junk("bogus\n");
    CHECK_THROWS(load_model_bundle(junk));
}
