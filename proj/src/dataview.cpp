#include "imclass/dataview.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "imclass/rng.hpp"

namespace imclass {

namespace {

class BaseView final : public DataView {
public:
    explicit BaseView(std::vector<Example> examples) : examples_(std::move(examples)) {
        if (examples_.empty()) throw std::invalid_argument("base view requires examples");
        arity_ = static_cast<int>(examples_[0].features.size());
        for (const Example& e : examples_)
            if (static_cast<int>(e.features.size()) != arity_)
                throw std::invalid_argument("feature arity differs between examples");
    }

    std::size_t size() const override { return examples_.size(); }
    Example get(std::size_t i) const override { return examples_[i]; }
    int arity() const override { return arity_; }

private:
    std::vector<Example> examples_;
    int arity_;
};

class RangeView final : public DataView {
public:
    RangeView(DataViewPtr parent, std::size_t start, std::size_t end)
        : parent_(std::move(parent)), start_(start), end_(end) {}

    std::size_t size() const override { return end_ - start_; }
    Example get(std::size_t i) const override { return parent_->get(start_ + i); }
    int arity() const override { return parent_->arity(); }

private:
    DataViewPtr parent_;
    std::size_t start_, end_;
};

class ConcatView final : public DataView {
public:
    ConcatView(DataViewPtr a, DataViewPtr b) : a_(std::move(a)), b_(std::move(b)) {}

    std::size_t size() const override { return a_->size() + b_->size(); }
    Example get(std::size_t i) const override {
        return i < a_->size() ? a_->get(i) : b_->get(i - a_->size());
    }
    int arity() const override { return a_->arity(); }

private:
    DataViewPtr a_, b_;
};

class ShuffleView final : public DataView {
public:
    ShuffleView(DataViewPtr parent, std::uint64_t seed) : parent_(std::move(parent)) {
        perm_.resize(parent_->size());
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        SplitMix64 rng(seed);
        for (std::size_t i = perm_.size(); i > 1; --i)
            std::swap(perm_[i - 1], perm_[rng.next_below(i)]);
    }

    std::size_t size() const override { return perm_.size(); }
    Example get(std::size_t i) const override { return parent_->get(perm_[i]); }
    int arity() const override { return parent_->arity(); }

private:
    DataViewPtr parent_;
    std::vector<std::size_t> perm_;
};

class ScaledView final : public DataView {
public:
    ScaledView(DataViewPtr parent, ScaleParams params)
        : parent_(std::move(parent)), params_(std::move(params)) {}

    std::size_t size() const override { return parent_->size(); }
    Example get(std::size_t i) const override {
        Example e = parent_->get(i);
        for (std::size_t f = 0; f < e.features.size(); ++f)
            e.features[f] = params_.apply(f, e.features[f]);
        return e;
    }
    int arity() const override { return parent_->arity(); }

private:
    DataViewPtr parent_;
    ScaleParams params_;
};

// Shared shape of the label-rewriting views.
template <typename Fn>
class RelabelView final : public DataView {
public:
    RelabelView(DataViewPtr parent, Fn fn) : parent_(std::move(parent)), fn_(std::move(fn)) {}

    std::size_t size() const override { return parent_->size(); }
    Example get(std::size_t i) const override {
        Example e = parent_->get(i);
        e.label = fn_(e.label);
        return e;
    }
    int arity() const override { return parent_->arity(); }

private:
    DataViewPtr parent_;
    Fn fn_;
};

template <typename Fn>
DataViewPtr relabel(DataViewPtr parent, Fn fn) {
    return std::make_shared<RelabelView<Fn>>(std::move(parent), std::move(fn));
}

class SubsetView final : public DataView {
public:
    SubsetView(DataViewPtr parent, std::vector<std::size_t> indices)
        : parent_(std::move(parent)), indices_(std::move(indices)) {}

    std::size_t size() const override { return indices_.size(); }
    Example get(std::size_t i) const override { return parent_->get(indices_[i]); }
    int arity() const override { return parent_->arity(); }

private:
    DataViewPtr parent_;
    std::vector<std::size_t> indices_;
};

}  // namespace

DataViewPtr view_base(std::vector<Example> examples) {
    return std::make_shared<BaseView>(std::move(examples));
}

DataViewPtr view_range(DataViewPtr view, std::size_t start, std::size_t end) {
    if (start > end || end > view->size())
        throw std::out_of_range("range view bounds out of range");
    return std::make_shared<RangeView>(std::move(view), start, end);
}

DataViewPtr view_concat(DataViewPtr a, DataViewPtr b) {
    if (a->arity() != b->arity())
        throw std::invalid_argument("concatenated views must share feature arity");
    return std::make_shared<ConcatView>(std::move(a), std::move(b));
}

DataViewPtr view_shuffle(DataViewPtr view, std::uint64_t seed) {
    return std::make_shared<ShuffleView>(std::move(view), seed);
}

ScaleParams::ScaleParams(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
    if (mins_.size() != maxs_.size())
        throw std::invalid_argument("scale parameter arity mismatch");
}

ScaleParams fit_scale(const DataView& view) {
    if (view.size() == 0) throw std::invalid_argument("cannot fit scale on an empty view");
    Example first = view.get(0);
    std::vector<double> mins = first.features;
    std::vector<double> maxs = first.features;
    for (std::size_t i = 1; i < view.size(); ++i) {
        const Example e = view.get(i);
        for (std::size_t f = 0; f < e.features.size(); ++f) {
            mins[f] = std::min(mins[f], e.features[f]);
            maxs[f] = std::max(maxs[f], e.features[f]);
        }
    }
    return ScaleParams(std::move(mins), std::move(maxs));
}

DataViewPtr apply_scale(DataViewPtr view, ScaleParams params) {
    if (static_cast<std::size_t>(view->arity()) != params.arity())
        throw std::invalid_argument("scale parameter arity mismatch");
    return std::make_shared<ScaledView>(std::move(view), std::move(params));
}

int ClassMapping::to_new(int original) const {
    const auto it = std::lower_bound(originals.begin(), originals.end(), original);
    if (it == originals.end() || *it != original)
        throw std::invalid_argument("label not present in class mapping");
    return static_cast<int>(it - originals.begin());
}

std::pair<DataViewPtr, ClassMapping> view_class_map_linear(DataViewPtr view) {
    ClassMapping mapping;
    {
        std::map<int, int> seen;
        for (std::size_t i = 0; i < view->size(); ++i) seen.emplace(view->get(i).label, 0);
        mapping.originals.reserve(seen.size());
        for (const auto& [label, _] : seen) mapping.originals.push_back(label);
    }
    DataViewPtr mapped = relabel(std::move(view), [mapping](int label) { return mapping.to_new(label); });
    return {std::move(mapped), std::move(mapping)};
}

DataViewPtr view_class_map_binary(DataViewPtr view, int positive_class) {
    return relabel(std::move(view),
                   [positive_class](int label) { return label == positive_class ? +1 : -1; });
}

DataViewPtr view_class_join(DataViewPtr view, const std::vector<ClassGroup>& groups) {
    std::map<int, int> remap;
    for (const ClassGroup& g : groups)
        for (int member : g.members) remap[member] = g.new_label;
    return relabel(std::move(view), [remap](int label) {
        const auto it = remap.find(label);
        return it == remap.end() ? label : it->second;
    });
}

DataViewPtr view_class_remove(DataViewPtr view, int class_id) {
    std::vector<std::size_t> keep;
    keep.reserve(view->size());
    for (std::size_t i = 0; i < view->size(); ++i)
        if (view->get(i).label != class_id) keep.push_back(i);
    return std::make_shared<SubsetView>(std::move(view), std::move(keep));
}

std::vector<Fold> make_folds(DataViewPtr view, int n_folds, std::uint64_t seed) {
    const std::size_t n = view->size();
    if (n_folds < 1) throw std::invalid_argument("fold count must be at least 1");
    if (static_cast<std::size_t>(n_folds) > n)
        throw std::invalid_argument("more folds than examples");

    DataViewPtr shuffled = view_shuffle(std::move(view), seed);
    if (n_folds == 1) return {{shuffled, shuffled}};

    std::vector<Fold> folds;
    folds.reserve(static_cast<std::size_t>(n_folds));
    const std::size_t base = n / static_cast<std::size_t>(n_folds);
    const std::size_t rem = n % static_cast<std::size_t>(n_folds);
    std::size_t start = 0;
    for (int f = 0; f < n_folds; ++f) {
        const std::size_t len = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
        const std::size_t end = start + len;
        DataViewPtr test = view_range(shuffled, start, end);
        DataViewPtr train;
        if (start == 0)
            train = view_range(shuffled, end, n);
        else if (end == n)
            train = view_range(shuffled, 0, start);
        else
            train = view_concat(view_range(shuffled, 0, start), view_range(shuffled, end, n));
        folds.push_back({std::move(train), std::move(test)});
        start = end;
    }
    return folds;
}

}  // namespace imclass
