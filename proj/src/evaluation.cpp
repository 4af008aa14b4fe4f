#include "imclass/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "imclass/textio.hpp"

namespace imclass {

ConfusionMatrix::ConfusionMatrix(std::vector<int> classes) : classes_(std::move(classes)) {
    std::sort(classes_.begin(), classes_.end());
    counts_.assign(classes_.size() * classes_.size(), 0);
}

std::size_t ConfusionMatrix::index_of(int label) const {
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), label);
    if (it == classes_.end() || *it != label)
        throw std::invalid_argument("label " + std::to_string(label) + " not in confusion matrix");
    return static_cast<std::size_t>(it - classes_.begin());
}

void ConfusionMatrix::add(int true_class, int guessed_class) {
    ++counts_[index_of(true_class) * classes_.size() + index_of(guessed_class)];
}

long long ConfusionMatrix::count(int true_class, int guessed_class) const {
    return counts_[index_of(true_class) * classes_.size() + index_of(guessed_class)];
}

long long ConfusionMatrix::class_total(int true_class) const {
    const std::size_t row = index_of(true_class);
    long long sum = 0;
    for (std::size_t j = 0; j < classes_.size(); ++j) sum += counts_[row * classes_.size() + j];
    return sum;
}

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (long long c : counts_) sum += c;
    return sum;
}

long long ConfusionMatrix::off_diagonal() const {
    long long sum = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i)
        for (std::size_t j = 0; j < classes_.size(); ++j)
            if (i != j) sum += counts_[i * classes_.size() + j];
    return sum;
}

int ModelBundle::predict_label(std::span<const double> features) const {
    if (features.size() != scale.arity())
        throw std::invalid_argument("feature arity does not match the model");
    std::vector<double> scaled(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) scaled[i] = scale.apply(i, features[i]);
    return classes.to_original(model.predict(scaled));
}

CrossValResult cross_validate(DataViewPtr data, const EvalParams& params) {
    if (params.n_folds < 1) throw std::invalid_argument("fold count must be at least 1");

    std::map<int, long long> class_counts;
    for (std::size_t i = 0; i < data->size(); ++i) ++class_counts[data->get(i).label];
    for (const auto& [label, count] : class_counts)
        if (count < params.n_folds)
            throw std::invalid_argument("class " + std::to_string(label) + " has only " +
                                        std::to_string(count) + " examples for " +
                                        std::to_string(params.n_folds) + " folds");

    auto [mapped, mapping] = view_class_map_linear(std::move(data));
    const std::vector<Fold> folds = make_folds(mapped, params.n_folds, params.seed);

    ScaleParams global_scale;
    if (params.scale_global) global_scale = fit_scale(*mapped);

    std::vector<int> class_list = mapping.originals;
    CrossValResult result;
    result.report.confusion = ConfusionMatrix(class_list);
    result.report.params = params;

    long long total_predictions = 0, total_wrong = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const ScaleParams scale = params.scale_global ? global_scale : fit_scale(*folds[f].train);
        DataViewPtr train = apply_scale(folds[f].train, scale);
        DataViewPtr test = apply_scale(folds[f].test, scale);

        MulticlassSvmModel model = train_multiclass(*train, params.spec, params.train);
        for (std::size_t c = 0; c < model.per_class.size(); ++c)
            if (!model.per_class[c].converged)
                result.report.warnings.push_back(
                    "fold " + std::to_string(f) + ": classifier for class " +
                    std::to_string(mapping.to_original(static_cast<int>(c))) +
                    " stopped at the epoch budget without converging");

        long long wrong = 0;
        for (std::size_t i = 0; i < test->size(); ++i) {
            const Example e = test->get(i);
            const int guessed = model.predict(e.features);
            result.report.confusion.add(mapping.to_original(e.label), mapping.to_original(guessed));
            if (guessed != e.label) ++wrong;
        }
        total_predictions += static_cast<long long>(test->size());
        total_wrong += wrong;
        result.report.fold_errors_pct.push_back(100.0 * static_cast<double>(wrong) /
                                                static_cast<double>(test->size()));

        if (f + 1 == folds.size())
            result.last_fold_model = ModelBundle{std::move(model), scale, mapping};
    }

    result.report.total_error_pct =
        100.0 * static_cast<double>(total_wrong) / static_cast<double>(total_predictions);
    result.report.max_error_pct =
        *std::max_element(result.report.fold_errors_pct.begin(), result.report.fold_errors_pct.end());
    result.report.min_error_pct =
        *std::min_element(result.report.fold_errors_pct.begin(), result.report.fold_errors_pct.end());
    return result;
}

DataViewPtr apply_simplified_problem(DataViewPtr view) {
    for (int cls : {0, 9, 10, 11, 21, 24, 25, 29}) view = view_class_remove(std::move(view), cls);
    return view_class_join(std::move(view), {{{1, 6}, 30}, {{4, 7}, 31}});
}

std::string format_percent(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 4);
    return std::string(buf, res.ptr);
}

std::string format_report(const EvalReport& report) {
    std::string out;
    out += "kernel=" + report.params.spec.name() +
           " param=" + format_double(report.params.spec.param) +
           " C=" + format_double(report.params.train.C) +
           " gap_tol=" + format_double(report.params.train.gap_tol) +
           " terminator=" + std::to_string(report.params.train.terminator) +
           " folds=" + std::to_string(report.params.n_folds) +
           " seed=" + std::to_string(report.params.seed) + "\n";
    out += "error rate (%): total=" + format_percent(report.total_error_pct) +
           " max=" + format_percent(report.max_error_pct) +
           " min=" + format_percent(report.min_error_pct) + "\n";

    const auto& classes = report.confusion.classes();
    out += "confusion (row: true class / column: guessed):\n";
    out += "       ";
    for (int c : classes) {
        std::string s = std::to_string(c);
        out += std::string(7 - std::min<std::size_t>(6, s.size()), ' ') + s;
    }
    out += "\n";
    for (int t : classes) {
        std::string row = std::to_string(t);
        out += std::string(7 - std::min<std::size_t>(6, row.size()), ' ') + row;
        for (int g : classes) {
            const long long n = report.confusion.count(t, g);
            std::string s = n == 0 ? "." : std::to_string(n);
            out += std::string(7 - std::min<std::size_t>(6, s.size()), ' ') + s;
        }
        out += "\n";
    }
    for (const std::string& w : report.warnings) out += "warning: " + w + "\n";
    return out;
}

void save_model_bundle(std::ostream& out, const ModelBundle& bundle) {
    out << "svmmulti 1\n";
    out << "classes " << bundle.classes.originals.size() << '\n';
    out << "labels";
    for (int label : bundle.classes.originals) out << ' ' << label;
    out << '\n';
    out << "scale " << bundle.scale.arity() << '\n';
    for (std::size_t i = 0; i < bundle.scale.arity(); ++i)
        out << "col " << format_double(bundle.scale.min(i)) << ' '
            << format_double(bundle.scale.max(i)) << '\n';
    for (std::size_t i = 0; i < bundle.model.per_class.size(); ++i) {
        out << "model " << i << '\n';
        save_binary_model(out, bundle.model.per_class[i]);
    }
}

namespace {

std::string next_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated model file");
    return line;
}

}  // namespace

ModelBundle load_model_bundle(std::istream& in) {
    if (next_line(in) != "svmmulti 1")
        throw std::runtime_error("not a version-1 multiclass model file");

    ModelBundle bundle;
    std::string line = next_line(in);
    if (line.rfind("classes ", 0) != 0) throw std::runtime_error("expected 'classes' line");
    const long long k = parse_int(line.substr(8));

    line = next_line(in);
    if (line.rfind("labels", 0) != 0) throw std::runtime_error("expected 'labels' line");
    {
        std::istringstream ss(line.substr(6));
        int label;
        while (ss >> label) bundle.classes.originals.push_back(label);
        if (static_cast<long long>(bundle.classes.originals.size()) != k)
            throw std::runtime_error("label count does not match class count");
    }

    line = next_line(in);
    if (line.rfind("scale ", 0) != 0) throw std::runtime_error("expected 'scale' line");
    const long long arity = parse_int(line.substr(6));
    std::vector<double> mins, maxs;
    for (long long i = 0; i < arity; ++i) {
        line = next_line(in);
        std::istringstream ss(line);
        std::string tag, lo, hi;
        if (!(ss >> tag >> lo >> hi) || tag != "col")
            throw std::runtime_error("malformed scale column line");
        mins.push_back(parse_double(lo));
        maxs.push_back(parse_double(hi));
    }
    bundle.scale = ScaleParams(std::move(mins), std::move(maxs));

    for (long long i = 0; i < k; ++i) {
        line = next_line(in);
        if (line != "model " + std::to_string(i))
            throw std::runtime_error("expected 'model " + std::to_string(i) + "' line");
        bundle.model.per_class.push_back(load_binary_model(in));
    }
    return bundle;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["total_error"] = report.total_error_pct;
    j["fold_errors"] = report.fold_errors_pct;
    j["max_error"] = report.max_error_pct;
    j["min_error"] = report.min_error_pct;
    j["classes"] = report.confusion.classes();
    auto& matrix = j["confusion"] = nlohmann::json::array();
    for (int t : report.confusion.classes()) {
        nlohmann::json row = nlohmann::json::array();
        for (int g : report.confusion.classes()) row.push_back(report.confusion.count(t, g));
        matrix.push_back(std::move(row));
    }
    j["params"] = {{"kernel", report.params.spec.name()},
                   {"kernel_param", report.params.spec.param},
                   {"C", report.params.train.C},
                   {"gap_tol", report.params.train.gap_tol},
                   {"terminator", report.params.train.terminator},
                   {"max_epochs", report.params.train.max_epochs},
                   {"folds", report.params.n_folds},
                   {"seed", report.params.seed},
                   {"scale_global", report.params.scale_global}};
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

}  // namespace imclass
