#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace imclass {

struct Example {
    std::vector<double> features;
    int label = 0;
    long long id = 0;
};

// Read-only indexed view over a collection of examples. Concrete views
// transform labels, order or feature values lazily; constructing a view
// never copies the underlying feature data.
class DataView {
public:
    virtual ~DataView() = default;

    virtual std::size_t size() const = 0;
    virtual Example get(std::size_t i) const = 0;
    virtual int arity() const = 0;
};

using DataViewPtr = std::shared_ptr<const DataView>;

// Identity view owning the examples. Requires a nonempty set with constant
// feature arity.
DataViewPtr view_base(std::vector<Example> examples);

// Half-open subrange [start, end).
DataViewPtr view_range(DataViewPtr view, std::size_t start, std::size_t end);

// a's examples followed by b's. Arity must match.
DataViewPtr view_concat(DataViewPtr a, DataViewPtr b);

// Seed-determined permutation, identical across runs and platforms.
DataViewPtr view_shuffle(DataViewPtr view, std::uint64_t seed);

// Per-feature range/midrange normalization parameters.
class ScaleParams {
public:
    ScaleParams() = default;
    ScaleParams(std::vector<double> mins, std::vector<double> maxs);

    std::size_t arity() const { return mins_.size(); }
    double min(std::size_t i) const { return mins_[i]; }
    double max(std::size_t i) const { return maxs_[i]; }
    double range(std::size_t i) const { return maxs_[i] - mins_[i]; }
    double midrange(std::size_t i) const { return (maxs_[i] + mins_[i]) / 2.0; }
    bool constant(std::size_t i) const { return maxs_[i] == mins_[i]; }

    // Fitted features map onto [-1, 1] with the endpoints attained exactly;
    // constant features map to 0. Out-of-range inputs extrapolate.
    double apply(std::size_t i, double x) const {
        if (constant(i)) return 0.0;
        return 2.0 * (x - mins_[i]) / (maxs_[i] - mins_[i]) - 1.0;
    }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
};

ScaleParams fit_scale(const DataView& view);
DataViewPtr apply_scale(DataViewPtr view, ScaleParams params);

// Bidirectional mapping between original labels and consecutive ids 0..k-1
// assigned in ascending original order.
struct ClassMapping {
    std::vector<int> originals;  // new id -> original label

    int to_new(int original) const;
    int to_original(int new_id) const { return originals[static_cast<std::size_t>(new_id)]; }
    int class_count() const { return static_cast<int>(originals.size()); }
};

std::pair<DataViewPtr, ClassMapping> view_class_map_linear(DataViewPtr view);

// positive_class becomes +1, everything else -1.
DataViewPtr view_class_map_binary(DataViewPtr view, int positive_class);

struct ClassGroup {
    std::vector<int> members;
    int new_label = 0;
};

DataViewPtr view_class_join(DataViewPtr view, const std::vector<ClassGroup>& groups);

DataViewPtr view_class_remove(DataViewPtr view, int class_id);

struct Fold {
    DataViewPtr train;
    DataViewPtr test;
};

// Shuffles by seed and splits into n_folds near-equal contiguous test
// ranges; earlier folds absorb the remainder. One fold means train and test
// are both the whole (shuffled) view.
std::vector<Fold> make_folds(DataViewPtr view, int n_folds, std::uint64_t seed);

}  // namespace imclass
