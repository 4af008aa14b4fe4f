#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "imclass/dataview.hpp"
#include "imclass/svm.hpp"

namespace imclass {

// Counts of (true class, guessed class) pairs, indexed by original labels.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<int> classes);

    void add(int true_class, int guessed_class);

    const std::vector<int>& classes() const { return classes_; }
    long long count(int true_class, int guessed_class) const;
    long long class_total(int true_class) const;
    long long total() const;
    long long off_diagonal() const;

private:
    std::size_t index_of(int label) const;

    std::vector<int> classes_;
    std::vector<long long> counts_;  // row-major classes x classes
};

struct EvalParams {
    KernelSpec spec;
    TrainConfig train;
    int n_folds = 2;
    std::uint64_t seed = 0;
    bool scale_global = false;  // fit scaling once on the whole set instead of per training fold
};

struct EvalReport {
    double total_error_pct = 0;
    std::vector<double> fold_errors_pct;
    double max_error_pct = 0;
    double min_error_pct = 0;
    ConfusionMatrix confusion{{}};
    EvalParams params;
    std::vector<std::string> warnings;
};

// A trained multiclass model together with everything needed to apply it to
// raw feature vectors.
struct ModelBundle {
    MulticlassSvmModel model;
    ScaleParams scale;
    ClassMapping classes;

    int predict_label(std::span<const double> features) const;
};

struct CrossValResult {
    EvalReport report;
    ModelBundle last_fold_model;
};

// Versioned text serialization of a ModelBundle; loading a saved bundle
// predicts identically to the original.
void save_model_bundle(std::ostream& out, const ModelBundle& bundle);
ModelBundle load_model_bundle(std::istream& in);

// Per fold: fit scaling on the training part, train one-against-rest,
// predict the test part. Every class needs at least n_folds examples.
CrossValResult cross_validate(DataViewPtr data, const EvalParams& params);

// Removes classes 0, 9, 10, 11, 21, 24, 25 and 29; merges 1+6 into 30 and
// 4+7 into 31. Absent classes are no-ops.
DataViewPtr apply_simplified_problem(DataViewPtr view);

std::string format_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

// Fixed-point percentage with 4 decimals and a '.' separator regardless of
// locale.
std::string format_percent(double value);

}  // namespace imclass
