#include "imclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "imclass/textio.hpp"

namespace imclass {

std::string KernelSpec::name() const {
    switch (kind) {
        case KernelKind::linear: return "linear";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::rbf: return rbf_unsquared ? "rbf-unsquared" : "rbf";
        case KernelKind::mlp: return "mlp";
    }
    return "unknown";
}

namespace {

void validate_spec(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::linear:
            break;
        case KernelKind::polynomial:
            if (spec.param < 1.0 || spec.param != std::floor(spec.param))
                throw std::invalid_argument("polynomial degree must be a positive integer");
            break;
        case KernelKind::rbf:
            if (!(spec.param > 0.0))
                throw std::invalid_argument("rbf sigma^2 must be positive");
            break;
        case KernelKind::mlp:
            break;
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("feature length mismatch");
    validate_spec(spec);
    switch (spec.kind) {
        case KernelKind::linear:
            return dot(x, y);
        case KernelKind::polynomial:
            return std::pow(dot(x, y) + 1.0, spec.param);
        case KernelKind::rbf: {
            double dist2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                dist2 += d * d;
            }
            const double arg = spec.rbf_unsquared ? std::sqrt(dist2) : dist2;
            return std::exp(-arg / (2.0 * spec.param));
        }
        case KernelKind::mlp:
            return std::tanh(dot(x, y) + spec.param);
    }
    throw std::logic_error("unreachable kernel kind");
}

namespace {

// Pairwise kernel values over the training set, either cached eagerly or
// evaluated per lookup. Both paths produce bit-identical values.
class GramSource {
public:
    GramSource(const KernelSpec& spec, const std::vector<std::vector<double>>& x, bool cache)
        : spec_(spec), x_(x) {
        if (cache) {
            const std::size_t n = x.size();
            matrix_.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    const double v = kernel_eval(spec_, x_[i], x_[j]);
                    matrix_[i * n + j] = v;
                    matrix_[j * n + i] = v;
                }
        }
    }

    double at(std::size_t i, std::size_t j) const {
        if (!matrix_.empty()) return matrix_[i * x_.size() + j];
        return i <= j ? kernel_eval(spec_, x_[i], x_[j]) : kernel_eval(spec_, x_[j], x_[i]);
    }

private:
    const KernelSpec& spec_;
    const std::vector<std::vector<double>>& x_;
    std::vector<double> matrix_;
};

struct TrainProblem {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    std::vector<long long> ids;
};

TrainProblem fetch_problem(const DataView& data) {
    TrainProblem p;
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("empty training view");
    p.x.reserve(n);
    p.y.reserve(n);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        Example e = data.get(i);
        if (e.label != 1 && e.label != -1)
            throw std::invalid_argument("binary training requires labels -1/+1");
        (e.label == 1 ? pos : neg) = true;
        p.x.push_back(std::move(e.features));
        p.y.push_back(e.label);
        p.ids.push_back(e.id);
    }
    if (!pos || !neg) throw std::invalid_argument("training data contains a single class");
    return p;
}

// Projection of v onto {0 <= a <= C, sum a_i y_i = 0}: shift every
// coordinate by -lambda*y_i and clip, with lambda found by bisection. The
// bracket covers inputs outside the box as well.
void project_to_constraint(std::vector<double>& alpha, const std::vector<int>& y, double C) {
    const auto residual = [&](double lambda) {
        double h = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            h += y[i] * std::clamp(alpha[i] - lambda * y[i], 0.0, C);
        return h;
    };
    double reach = C;
    for (double a : alpha) reach = std::max(reach, std::abs(a));
    double lo = -(C + reach), hi = C + reach;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) >= 0 ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        alpha[i] = std::clamp(alpha[i] - lambda * y[i], 0.0, C);
}

class Trainer {
public:
    Trainer(const TrainProblem& p, const GramSource& gram, const TrainConfig& cfg)
        : p_(p), gram_(gram), cfg_(cfg), n_(p.x.size()),
          alpha_(n_, 0.0), f0_(n_, 0.0) {
        diag_.resize(n_);
        double rate_sum = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            diag_[i] = gram_.at(i, i);
            if (!std::isfinite(diag_[i]))
                throw std::invalid_argument("non-finite kernel value during training");
            if (diag_[i] > 0.0) rate_sum += 1.0 / diag_[i];
        }
        mean_rate_ = rate_sum > 0.0 ? rate_sum / static_cast<double>(n_) : 1.0;
        bound_eps_ = 1e-12 * std::max(1.0, cfg_.C);
    }

    void run() {
        std::vector<std::size_t> all(n_);
        std::iota(all.begin(), all.end(), std::size_t{0});
        int stall = 0;
        while (epochs_ < cfg_.max_epochs && !converged_) {
            std::vector<std::size_t> violators = kkt_violators();
            const bool full = violators.empty() || stall >= 3;
            const double before = objective();
            run_epoch(full ? all : violators);
            const double gap_now = certified_gap();
            gap_history_.push_back(gap_now);
            if (terminated(gap_now)) {
                converged_ = true;
                break;
            }
            const double gained = objective() - before;
            stall = gained < 1e-9 * std::max(1.0, std::abs(before)) ? stall + 1 : 0;
        }
        finalize();
    }

    BinarySvmModel build_model(const KernelSpec& spec) const {
        BinarySvmModel model;
        model.kernel = spec;
        model.C = cfg_.C;
        model.bias = bias_;
        model.converged = converged_;
        model.epochs_used = epochs_;
        model.gap_history = gap_history_;
        for (std::size_t i = 0; i < n_; ++i)
            if (alpha_[i] > 0.0)
                model.support.push_back({p_.ids[i], alpha_[i], p_.y[i], p_.x[i]});
        return model;
    }

private:
    struct Direction {
        std::vector<double> d;       // displacement to the projected target
        std::vector<double> dq;      // dq_j = sum_i d_i y_i K_ij
        double step = 0.0;           // exact line maximizer in [0, 1]
        double gain = 0.0;           // objective increase at that step
    };

    // Feasible ascent direction: move the chosen coordinates along the
    // gradient (per-coordinate rate 1/K_ii, or the mean rate), project back
    // onto the box-and-hyperplane set, and maximize the objective exactly on
    // the segment towards the projected point.
    Direction make_direction(const std::vector<std::size_t>& indices,
                             const std::vector<double>& grad, bool per_coordinate) const {
        Direction out;
        std::vector<double> target = alpha_;
        for (std::size_t i : indices) {
            const double rate = per_coordinate ? (diag_[i] > 0.0 ? 1.0 / diag_[i] : 0.0)
                                               : mean_rate_;
            target[i] += rate * grad[i];
        }
        project_to_constraint(target, p_.y, cfg_.C);

        out.d.resize(n_);
        bool moved = false;
        for (std::size_t i = 0; i < n_; ++i) {
            out.d[i] = target[i] - alpha_[i];
            moved |= out.d[i] != 0.0;
        }
        if (!moved) return out;

        out.dq.assign(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (out.d[i] == 0.0) continue;
            const double w = out.d[i] * p_.y[i];
            for (std::size_t j = 0; j < n_; ++j) out.dq[j] += w * gram_.at(i, j);
        }
        double slope = 0.0, curvature = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            slope += out.d[i] * grad[i];
            curvature += out.d[i] * p_.y[i] * out.dq[i];
        }
        if (slope <= 0.0) return out;
        out.step = curvature > 0.0 ? std::min(1.0, slope / curvature) : 1.0;
        out.gain = slope * out.step - 0.5 * out.step * out.step * curvature;
        return out;
    }

    // One pass over the chosen coordinates. Of the per-coordinate-rate and
    // mean-rate directions, the one with the larger exact line-search gain
    // is taken; the objective never decreases.
    void run_epoch(const std::vector<std::size_t>& indices) {
        std::vector<double> grad(n_);
        for (std::size_t i = 0; i < n_; ++i) grad[i] = 1.0 - p_.y[i] * f0_[i];

        const Direction scaled = make_direction(indices, grad, true);
        const Direction flat = make_direction(indices, grad, false);
        const Direction& best = scaled.gain >= flat.gain ? scaled : flat;
        if (best.gain > 0.0) {
            for (std::size_t i = 0; i < n_; ++i) {
                alpha_[i] = std::clamp(alpha_[i] + best.step * best.d[i], 0.0, cfg_.C);
                f0_[i] += best.step * best.dq[i];
            }
        }
        update_bias();
        ++epochs_;
    }

    // In-training bias: exact minimizer of the hinge sum, i.e. the primal-
    // optimal offset for the current coefficients. The hinge is piecewise
    // linear in b with breakpoints at e_i = y_i - f0_i, so the optimum lies
    // on a breakpoint or a flat interval between two of them.
    void update_bias() {
        std::vector<double> breaks(n_);
        for (std::size_t i = 0; i < n_; ++i) breaks[i] = p_.y[i] - f0_[i];
        const auto hinge = [&](double b) {
            double h = 0.0;
            for (std::size_t i = 0; i < n_; ++i)
                h += std::max(0.0, 1.0 - p_.y[i] * (f0_[i] + b));
            return h;
        };
        double best = hinge(breaks[0]);
        double lo = breaks[0], hi = breaks[0];
        for (std::size_t i = 1; i < n_; ++i) {
            const double h = hinge(breaks[i]);
            if (h < best - 1e-12 * std::max(1.0, best)) {
                best = h;
                lo = hi = breaks[i];
            } else if (h <= best + 1e-12 * std::max(1.0, best)) {
                lo = std::min(lo, breaks[i]);
                hi = std::max(hi, breaks[i]);
            }
        }
        bias_ = 0.5 * (lo + hi);
    }

    // Final model bias: mean over margin support vectors of y_i - f0_i,
    // falling back to the midpoint of the bound-derived interval when no
    // coefficient is strictly inside the box.
    void margin_sv_bias() {
        double sum = 0.0;
        int count = 0;
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        bool has_lower = false, has_upper = false;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e = p_.y[i] - f0_[i];
            if (at_zero(i)) {
                if (p_.y[i] > 0) {
                    lower = std::max(lower, e);
                    has_lower = true;
                } else {
                    upper = std::min(upper, e);
                    has_upper = true;
                }
            } else if (at_cap(i)) {
                if (p_.y[i] > 0) {
                    upper = std::min(upper, e);
                    has_upper = true;
                } else {
                    lower = std::max(lower, e);
                    has_lower = true;
                }
            } else {
                sum += e;
                ++count;
            }
        }
        if (count > 0)
            bias_ = sum / count;
        else if (has_lower && has_upper)
            bias_ = 0.5 * (lower + upper);
        else if (has_lower)
            bias_ = lower;
        else if (has_upper)
            bias_ = upper;
        else
            bias_ = 0.0;
    }

    bool at_zero(std::size_t i) const { return alpha_[i] <= bound_eps_; }
    bool at_cap(std::size_t i) const { return alpha_[i] >= cfg_.C - bound_eps_; }

    std::vector<std::size_t> kkt_violators() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i) {
            const double margin = p_.y[i] * (f0_[i] + bias_);
            bool bad;
            if (at_zero(i))
                bad = margin < 1.0 - cfg_.kkt_tol;
            else if (at_cap(i))
                bad = margin > 1.0 + cfg_.kkt_tol;
            else
                bad = std::abs(margin - 1.0) > cfg_.kkt_tol;
            if (bad) out.push_back(i);
        }
        return out;
    }

    double objective() const {
        double sum = 0.0, quad = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            sum += alpha_[i];
            quad += alpha_[i] * p_.y[i] * f0_[i];
        }
        return sum - 0.5 * quad;
    }

    double primal() const {
        double norm2 = 0.0, hinge = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            norm2 += alpha_[i] * p_.y[i] * f0_[i];
            hinge += std::max(0.0, 1.0 - p_.y[i] * (f0_[i] + bias_));
        }
        return 0.5 * norm2 + cfg_.C * hinge;
    }

    // Certified feasibility gap: the best primal value seen so far minus the
    // current dual objective. Monotone along the ascent and zero at the
    // optimum.
    double certified_gap() {
        best_primal_ = std::min(best_primal_, primal());
        return best_primal_ - objective();
    }

    bool terminated(double gap_now) const {
        if ((cfg_.terminator & 2) && !kkt_violators().empty()) return false;
        if ((cfg_.terminator & 1) && gap_now > cfg_.gap_tol) return false;
        return true;
    }

    void finalize() {
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] < bound_eps_) alpha_[i] = 0.0;
            if (alpha_[i] > cfg_.C - bound_eps_) alpha_[i] = cfg_.C;
        }
        std::fill(f0_.begin(), f0_.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            const double w = alpha_[i] * p_.y[i];
            for (std::size_t j = 0; j < n_; ++j) f0_[j] += w * gram_.at(i, j);
        }
        margin_sv_bias();
    }

    const TrainProblem& p_;
    const GramSource& gram_;
    const TrainConfig& cfg_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> f0_;
    std::vector<double> diag_;
    double mean_rate_ = 1.0;
    double bias_ = 0.0;
    double bound_eps_ = 0.0;
    double best_primal_ = std::numeric_limits<double>::infinity();
    int epochs_ = 0;
    bool converged_ = false;
    std::vector<double> gap_history_;
};

void validate_train_config(const TrainConfig& cfg) {
    if (!(cfg.C > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(cfg.gap_tol > 0.0)) throw std::invalid_argument("gap tolerance must be positive");
    if (cfg.terminator < 1 || cfg.terminator > 3)
        throw std::invalid_argument("terminator bitmask must be 1, 2 or 3");
    if (cfg.max_epochs < 1) throw std::invalid_argument("epoch budget must be positive");
}

}  // namespace

BinarySvmModel train_binary(const DataView& data, const KernelSpec& spec, const TrainConfig& cfg) {
    validate_spec(spec);
    validate_train_config(cfg);
    const TrainProblem problem = fetch_problem(data);
    const GramSource gram(spec, problem.x, cfg.use_gram_cache);
    if (cfg.use_gram_cache)
        for (std::size_t i = 0; i < problem.x.size(); ++i)
            for (std::size_t j = i; j < problem.x.size(); ++j)
                if (!std::isfinite(gram.at(i, j)))
                    throw std::invalid_argument("non-finite kernel value during training");

    Trainer trainer(problem, gram, cfg);
    trainer.run();
    return trainer.build_model(spec);
}

double decision_value(const BinarySvmModel& model, std::span<const double> x) {
    double sum = model.bias;
    for (const SupportVector& sv : model.support)
        sum += sv.alpha * sv.y * kernel_eval(model.kernel, sv.features, x);
    return sum;
}

int classify(const BinarySvmModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? +1 : -1;
}

double dual_objective(const BinarySvmModel& model) {
    double sum = 0.0, quad = 0.0;
    for (const SupportVector& a : model.support) {
        sum += a.alpha;
        for (const SupportVector& b : model.support)
            quad += a.alpha * b.alpha * a.y * b.y * kernel_eval(model.kernel, a.features, b.features);
    }
    return sum - 0.5 * quad;
}

double feasibility_gap(const BinarySvmModel& model, const DataView& data) {
    double norm2 = 0.0, sum = 0.0;
    for (const SupportVector& a : model.support) {
        sum += a.alpha;
        for (const SupportVector& b : model.support)
            norm2 += a.alpha * b.alpha * a.y * b.y * kernel_eval(model.kernel, a.features, b.features);
    }
    double hinge = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Example e = data.get(i);
        hinge += std::max(0.0, 1.0 - e.label * decision_value(model, e.features));
    }
    const double primal = 0.5 * norm2 + model.C * hinge;
    const double dual = sum - 0.5 * norm2;
    return primal - dual;
}

int MulticlassSvmModel::predict(std::span<const double> x) const {
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < per_class.size(); ++i) {
        const double v = decision_value(per_class[i], x);
        if (v > best_value) {
            best_value = v;
            best = static_cast<int>(i);
        }
    }
    return best;
}

MulticlassSvmModel train_multiclass(const DataView& data, const KernelSpec& spec,
                                    const TrainConfig& cfg) {
    int k = 0;
    std::vector<long long> counts;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int label = data.get(i).label;
        if (label < 0) throw std::invalid_argument("multiclass labels must be 0..k-1");
        if (label >= k) {
            k = label + 1;
            counts.resize(static_cast<std::size_t>(k), 0);
        }
        ++counts[static_cast<std::size_t>(label)];
    }
    if (k < 2) throw std::invalid_argument("multiclass training requires at least 2 classes");
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw std::invalid_argument("class " + std::to_string(c) + " has no examples");

    // The view passed in is shared by every binary problem; wrap it without
    // copying.
    struct Alias final : DataView {
        const DataView* inner;
        std::size_t size() const override { return inner->size(); }
        Example get(std::size_t i) const override { return inner->get(i); }
        int arity() const override { return inner->arity(); }
    };
    auto alias = std::make_shared<Alias>();
    alias->inner = &data;

    MulticlassSvmModel model;
    model.per_class.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        DataViewPtr binary = view_class_map_binary(alias, c);
        model.per_class.push_back(train_binary(*binary, spec, cfg));
    }
    return model;
}

double gram_min_eigenvalue(const KernelSpec& spec,
                           const std::vector<std::vector<double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("need at least 2 points");
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel_eval(spec, points[static_cast<std::size_t>(i)],
                                         points[static_cast<std::size_t>(j)]);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace {

KernelSpec kernel_from_name(const std::string& name, double param) {
    KernelSpec spec;
    spec.param = param;
    if (name == "linear")
        spec.kind = KernelKind::linear;
    else if (name == "polynomial")
        spec.kind = KernelKind::polynomial;
    else if (name == "rbf")
        spec.kind = KernelKind::rbf;
    else if (name == "rbf-unsquared") {
        spec.kind = KernelKind::rbf;
        spec.rbf_unsquared = true;
    } else if (name == "mlp")
        spec.kind = KernelKind::mlp;
    else
        throw std::runtime_error("unknown kernel name '" + name + "'");
    return spec;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::string expect_line(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated model file");
    if (line.rfind(key + " ", 0) != 0 && line != key)
        throw std::runtime_error("expected '" + key + "' line in model file");
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
}

}  // namespace

void save_binary_model(std::ostream& out, const BinarySvmModel& model) {
    out << "svmmodel 1\n";
    out << "kernel " << model.kernel.name() << ' ' << format_double(model.kernel.param) << '\n';
    out << "C " << format_double(model.C) << '\n';
    out << "bias " << format_double(model.bias) << '\n';
    out << "converged " << (model.converged ? 1 : 0) << '\n';
    out << "epochs " << model.epochs_used << '\n';
    const std::size_t dim = model.support.empty() ? 0 : model.support.front().features.size();
    out << "dim " << dim << '\n';
    out << "nsv " << model.support.size() << '\n';
    for (const SupportVector& sv : model.support) {
        out << "sv " << sv.index << ' ' << format_double(sv.alpha) << ' ' << sv.y;
        for (double v : sv.features) out << ' ' << format_double(v);
        out << '\n';
    }
}

BinarySvmModel load_binary_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "svmmodel 1")
        throw std::runtime_error("not a version-1 svm model file");

    BinarySvmModel model;
    {
        const auto toks = split_tokens(expect_line(in, "kernel"));
        if (toks.size() != 2) throw std::runtime_error("malformed kernel line");
        model.kernel = kernel_from_name(toks[0], parse_double(toks[1]));
    }
    model.C = parse_double(expect_line(in, "C"));
    model.bias = parse_double(expect_line(in, "bias"));
    model.converged = parse_int(expect_line(in, "converged")) != 0;
    model.epochs_used = static_cast<int>(parse_int(expect_line(in, "epochs")));
    const long long dim = parse_int(expect_line(in, "dim"));
    const long long nsv = parse_int(expect_line(in, "nsv"));
    for (long long i = 0; i < nsv; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated model file");
        const auto toks = split_tokens(line);
        if (toks.size() != static_cast<std::size_t>(dim) + 4 || toks[0] != "sv")
            throw std::runtime_error("malformed sv line");
        SupportVector sv;
        sv.index = parse_int(toks[1]);
        sv.alpha = parse_double(toks[2]);
        sv.y = static_cast<int>(parse_int(toks[3]));
        sv.features.reserve(static_cast<std::size_t>(dim));
        for (long long f = 0; f < dim; ++f) sv.features.push_back(parse_double(toks[4 + f]));
        model.support.push_back(std::move(sv));
    }
    return model;
}

}  // namespace imclass
