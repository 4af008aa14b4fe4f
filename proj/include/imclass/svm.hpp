#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "imclass/dataview.hpp"

namespace imclass {

enum class KernelKind { linear, polynomial, rbf, mlp };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double param = 0.0;  // degree d (polynomial), sigma^2 (rbf), bias (mlp)

    // The Gaussian kernel squares the distance in the exponent. Setting this
    // uses the unsquared exp(-||x-y|| / (2 sigma^2)) variant instead.
    bool rbf_unsquared = false;

    std::string name() const;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

struct TrainConfig {
    double C = 10.0;
    double gap_tol = 1e-3;  // feasibility-gap termination threshold
    int terminator = 3;     // bit 1: gap criterion, bit 2: KKT criterion
    int max_epochs = 3000;  // sweep budget
    double kkt_tol = 1e-3;
    bool use_gram_cache = true;
};

struct SupportVector {
    long long index = 0;  // position in the training view
    double alpha = 0;
    int y = 0;  // -1 or +1
    std::vector<double> features;
};

struct BinarySvmModel {
    KernelSpec kernel;
    double C = 0;
    double bias = 0;
    std::vector<SupportVector> support;
    bool converged = false;
    int epochs_used = 0;

    // Feasibility gap logged after every training epoch. Diagnostic only;
    // not serialized.
    std::vector<double> gap_history;
};

// Dual ascent with per-coordinate rate 1/K(x_i,x_i), KKT-violator chunking
// and clipping to [0, C]; the equality constraint is restored after every
// sweep. Labels must be -1/+1 with both classes present.
BinarySvmModel train_binary(const DataView& data, const KernelSpec& spec, const TrainConfig& cfg);

// sum_i alpha_i y_i K(x_i, x) + bias; classify by sign with sgn(0) = +1.
double decision_value(const BinarySvmModel& model, std::span<const double> x);

// -1 or +1 from the sign of the decision value; zero counts as positive.
int classify(const BinarySvmModel& model, std::span<const double> x);

// W(alpha) computed from the stored support vectors.
double dual_objective(const BinarySvmModel& model);

// Primal objective minus dual objective at the model's coefficients,
// evaluated over the given (training) data.
double feasibility_gap(const BinarySvmModel& model, const DataView& data);

struct MulticlassSvmModel {
    std::vector<BinarySvmModel> per_class;  // entry i separates class i from the rest

    // argmax of the per-class decision values; ties go to the lowest class.
    int predict(std::span<const double> x) const;
};

// One-against-the-rest over labels 0..k-1; every class must be nonempty.
MulticlassSvmModel train_multiclass(const DataView& data, const KernelSpec& spec,
                                    const TrainConfig& cfg);

// Smallest eigenvalue of the Gram matrix over the points. Diagnostic: Mercer
// kernels give a nonnegative result up to roundoff, the mlp kernel may not.
double gram_min_eigenvalue(const KernelSpec& spec, const std::vector<std::vector<double>>& points);

void save_binary_model(std::ostream& out, const BinarySvmModel& model);
BinarySvmModel load_binary_model(std::istream& in);

}  // namespace imclass
