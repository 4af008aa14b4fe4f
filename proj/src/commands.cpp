#include "imclass/cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "imclass/descriptors.hpp"
#include "imclass/evaluation.hpp"
#include "imclass/featureset.hpp"
#include "imclass/image_io.hpp"
#include "imclass/svm.hpp"
#include "imclass/textio.hpp"

namespace fs = std::filesystem;

namespace imclass::cli {

namespace {

void use_long_help(CLI::App& app) { app.set_help_flag("--help", "print this help and exit"); }

// Exit code if parsing already settled the command (help or a flag error),
// nullopt when the command should proceed.
std::optional<int> finish_parse(CLI::App& app, const std::vector<std::string>& args,
                                std::ostream& out, std::ostream& err) {
    // CLI11 wants argv reversed.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    return std::nullopt;
}

KernelSpec kernel_from_code(int code, double param, bool rbf_unsquared) {
    KernelSpec spec;
    spec.param = param;
    spec.rbf_unsquared = rbf_unsquared;
    switch (code) {
        case 1: spec.kind = KernelKind::linear; break;
        case 2: spec.kind = KernelKind::polynomial; break;
        case 3: spec.kind = KernelKind::rbf; break;
        case 4: spec.kind = KernelKind::mlp; break;
        case 5:
        case 6:
        case 7:
            throw std::runtime_error("kernel code " + std::to_string(code) +
                                     " is reserved and not implemented; use 1-4");
        default:
            throw std::runtime_error("unknown kernel code " + std::to_string(code) +
                                     "; pass -k 0 to list kernels");
    }
    return spec;
}

void print_kernel_list(std::ostream& out) {
    out << "available kernels (-k):\n"
           "  1  linear        -p ignored\n"
           "  2  polynomial    -p degree d\n"
           "  3  rbf           -p sigma^2\n"
           "  4  mlp           -p bias b\n";
}

FeatureSet read_featureset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature file " + path);
    return load_featureset(in);
}

ModelBundle read_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    return load_model_bundle(in);
}

}  // namespace

int run_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"train or cross-validate a multiclass SVM on a feature file"};
    app.name("imclass train");
    use_long_help(app);

    std::string dataset, save_path, load_path, report_json;
    int folds = 2, kernel_code = -1, terminator = 3;
    double kernel_param = 0.0, C = 10.0, gap_tol = 1e-3;
    std::uint64_t seed = 1;
    bool scale_global = false, rbf_unsquared = false;

    app.add_option("-d", dataset, "feature file (FEATURESET.feat)");
    app.add_option("-f", folds, "number of cross-validation folds; 1 trains on all data");
    auto* kopt = app.add_option("-k", kernel_code, "kernel code; 0 lists kernels")->required();
    auto* popt = app.add_option("-p", kernel_param, "kernel parameter (degree / sigma^2 / bias)");
    app.add_option("-C", C, "box constraint upper bound");
    app.add_option("-g", gap_tol, "feasibility gap tolerance");
    app.add_option("-m", terminator, "termination bitmask: 1 gap, 2 KKT, 3 both");
    app.add_option("-o", save_path, "save the last trained model here");
    app.add_option("-l", load_path, "load a model and evaluate it on the dataset");
    app.add_option("-s", seed, "shuffle seed");
    app.add_flag("--scale-global", scale_global,
                 "fit feature scaling on the whole set instead of each training fold");
    app.add_flag("--rbf-unsquared", rbf_unsquared,
                 "use exp(-|x-y|/(2 sigma^2)) instead of the squared-distance Gaussian");
    app.add_option("--report-json", report_json, "also write the report as JSON to this file");

    if (auto code = finish_parse(app, args, out, err)) return *code;
    (void)kopt;

    try {
        if (kernel_code == 0) {
            print_kernel_list(out);
            return 0;
        }
        const KernelSpec spec = kernel_from_code(kernel_code, kernel_param, rbf_unsquared);
        if (spec.kind == KernelKind::linear && popt->count() > 0)
            err << "warning: -p is ignored for the linear kernel\n";

        if (dataset.empty()) throw std::runtime_error("missing -d FEATURESET.feat");
        const FeatureSet features = read_featureset(dataset);
        if (features.rows.empty()) throw std::runtime_error("feature file has no rows");

        if (!load_path.empty()) {
            const ModelBundle bundle = read_bundle(load_path);
            long long wrong = 0;
            for (const Example& row : features.rows)
                if (bundle.predict_label(row.features) != row.label) ++wrong;
            const double pct = 100.0 * static_cast<double>(wrong) /
                               static_cast<double>(features.rows.size());
            out << "examples=" << features.rows.size() << " misclassified=" << wrong
                << " error rate (%)=" << format_percent(pct) << "\n";
            return 0;
        }

        EvalParams params;
        params.spec = spec;
        params.train.C = C;
        params.train.gap_tol = gap_tol;
        params.train.terminator = terminator;
        params.n_folds = folds;
        params.seed = seed;
        params.scale_global = scale_global;

        const CrossValResult result = cross_validate(view_base(features.rows), params);
        out << format_report(result.report);

        if (!report_json.empty()) {
            std::ofstream jf(report_json);
            if (!jf) throw std::runtime_error("cannot write " + report_json);
            jf << report_to_json(result.report);
        }
        if (!save_path.empty()) {
            std::ofstream mf(save_path);
            if (!mf) throw std::runtime_error("cannot write " + save_path);
            save_model_bundle(mf, result.last_fold_model);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_predict(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"predict class labels for a feature file"};
    app.name("imclass predict");
    use_long_help(app);

    std::string model_path, feature_path;
    app.add_option("-l", model_path, "model file")->required();
    app.add_option("-f", feature_path, "feature file")->required();

    if (auto code = finish_parse(app, args, out, err)) return *code;

    try {
        const ModelBundle bundle = read_bundle(model_path);
        const FeatureSet features = read_featureset(feature_path);
        if (!features.rows.empty() &&
            features.rows.front().features.size() != bundle.scale.arity())
            throw std::runtime_error("feature arity does not match the model");
        for (const Example& row : features.rows)
            out << bundle.predict_label(row.features) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

struct ImageJob {
    std::string path;
    std::optional<std::array<int, 4>> crop;  // left, top, width, height
    int label = 0;
};

const char* const kGenfeatureUsage =
    "usage: imclass genfeature (-i IMAGE [-x LEFT -y TOP -w WIDTH -h HEIGHT])*\n"
    "                          [-D LABELED_DIR] -o FEATURESET.feat [--ngtdm-d N]\n"
    "  -i IMAGE     PNG or JPEG image; an optional crop follows the flag\n"
    "  -D DIR       directory of class subdirectories with images (labeled rows)\n"
    "  -o FILE      output feature file\n"
    "  --ngtdm-d N  NGTDM neighborhood radius (default 1)\n";

bool image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<ImageJob> scan_labeled_dir(const std::string& dir) {
    std::vector<ImageJob> jobs;
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    for (const fs::path& cdir : class_dirs) {
        const int label = static_cast<int>(parse_int(cdir.filename().string()));
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(cdir))
            if (entry.is_regular_file() && image_extension(entry.path()))
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) jobs.push_back({f.string(), std::nullopt, label});
    }
    return jobs;
}

}  // namespace

// The grammar is positional (each -i may be followed by its own crop), so
// this command parses argv by hand.
int run_genfeature(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<ImageJob> jobs;
    std::string out_path, labeled_dir;
    NgtdmConfig ncfg;

    try {
        std::size_t i = 0;
        const auto need_value = [&](const std::string& flag) -> std::string {
            if (i + 1 >= args.size()) throw std::runtime_error("missing value after " + flag);
            return args[++i];
        };
        std::optional<int> cx, cy, cw, ch;
        const auto flush_crop = [&] {
            if (!cx && !cy && !cw && !ch) return;
            if (jobs.empty()) throw std::runtime_error("crop flags must follow -i IMAGE");
            if (!(cx && cy && cw && ch))
                throw std::runtime_error("a crop needs all of -x -y -w -h");
            jobs.back().crop = {{*cx, *cy, *cw, *ch}};
            cx = cy = cw = ch = std::nullopt;
        };
        for (; i < args.size(); ++i) {
            const std::string& a = args[i];
            if (a == "--help") {
                out << kGenfeatureUsage;
                return 0;
            } else if (a == "-i") {
                flush_crop();
                jobs.push_back({need_value("-i"), std::nullopt, 0});
            } else if (a == "-x") {
                cx = static_cast<int>(parse_int(need_value("-x")));
            } else if (a == "-y") {
                cy = static_cast<int>(parse_int(need_value("-y")));
            } else if (a == "-w") {
                cw = static_cast<int>(parse_int(need_value("-w")));
            } else if (a == "-h") {
                ch = static_cast<int>(parse_int(need_value("-h")));
            } else if (a == "-D") {
                labeled_dir = need_value("-D");
            } else if (a == "-o") {
                out_path = need_value("-o");
            } else if (a == "--ngtdm-d") {
                ncfg.d = static_cast<int>(parse_int(need_value("--ngtdm-d")));
            } else {
                throw std::runtime_error("unknown argument '" + a + "'");
            }
        }
        flush_crop();

        if (!labeled_dir.empty()) {
            const auto labeled = scan_labeled_dir(labeled_dir);
            jobs.insert(jobs.end(), labeled.begin(), labeled.end());
        }
        if (out_path.empty()) throw std::runtime_error("missing -o FEATURESET.feat");
        if (jobs.empty()) throw std::runtime_error("no input images (-i or -D)");

        const GaborBankConfig gcfg;
        const FeatureLayout layout = feature_layout(gcfg, ncfg);
        FeatureSet fs_out;
        fs_out.arity = layout.total();
        fs_out.segments = layout.describe();
        long long next_id = 0;
        for (const ImageJob& job : jobs) {
            RasterImage img = load_image(job.path);
            if (job.crop) {
                const auto [l, t, w, h] = *job.crop;
                img = img.crop(l, t, w, h);
            }
            Example row;
            row.id = next_id++;
            row.label = job.label;
            row.features = extract_all(img, gcfg, ncfg);
            fs_out.rows.push_back(std::move(row));
        }

        std::ofstream fout(out_path);
        if (!fout) throw std::runtime_error("cannot write " + out_path);
        save_featureset(fout, fs_out);
        out << "wrote " << fs_out.rows.size() << " rows (arity " << fs_out.arity << ") to "
            << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n" << kGenfeatureUsage;
        return 1;
    }
}

int run_stats(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"statistics over a directory of class-labeled images"};
    app.name("imclass stats");
    use_long_help(app);

    int class_filter = -1;
    std::string dir;
    app.add_option("-c", class_filter, "class id, or -1 for all classes")->required();
    app.add_option("dir", dir, "directory with one subdirectory per class")->required();

    if (auto code = finish_parse(app, args, out, err)) return *code;

    try {
        struct Stat {
            long long count = 0;
            int wmin = 0, wmax = 0, hmin = 0, hmax = 0;
            double wsum = 0, hsum = 0;
        };
        std::map<int, Stat> stats;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_directory()) continue;
            const int label = static_cast<int>(parse_int(entry.path().filename().string()));
            if (class_filter != -1 && label != class_filter) continue;
            Stat& s = stats[label];
            std::vector<fs::path> files;
            for (const auto& f : fs::directory_iterator(entry.path()))
                if (f.is_regular_file() && image_extension(f.path())) files.push_back(f.path());
            std::sort(files.begin(), files.end());
            for (const fs::path& f : files) {
                const RasterImage img = load_image(f.string());
                if (s.count == 0) {
                    s.wmin = s.wmax = img.width();
                    s.hmin = s.hmax = img.height();
                } else {
                    s.wmin = std::min(s.wmin, img.width());
                    s.wmax = std::max(s.wmax, img.width());
                    s.hmin = std::min(s.hmin, img.height());
                    s.hmax = std::max(s.hmax, img.height());
                }
                s.wsum += img.width();
                s.hsum += img.height();
                ++s.count;
            }
        }
        if (class_filter != -1 && stats.find(class_filter) == stats.end())
            stats[class_filter] = {};

        Stat total;
        for (const auto& [label, s] : stats) {
            out << "class " << label << ": count=" << s.count;
            if (s.count > 0)
                out << " width min=" << s.wmin << " mean=" << format_double(s.wsum / s.count)
                    << " max=" << s.wmax << " height min=" << s.hmin
                    << " mean=" << format_double(s.hsum / s.count) << " max=" << s.hmax;
            out << "\n";
            if (s.count > 0) {
                if (total.count == 0) {
                    total.wmin = s.wmin;
                    total.wmax = s.wmax;
                    total.hmin = s.hmin;
                    total.hmax = s.hmax;
                } else {
                    total.wmin = std::min(total.wmin, s.wmin);
                    total.wmax = std::max(total.wmax, s.wmax);
                    total.hmin = std::min(total.hmin, s.hmin);
                    total.hmax = std::max(total.hmax, s.hmax);
                }
                total.wsum += s.wsum;
                total.hsum += s.hsum;
                total.count += s.count;
            }
        }
        if (class_filter == -1) {
            out << "all classes: count=" << total.count;
            if (total.count > 0)
                out << " width min=" << total.wmin
                    << " mean=" << format_double(total.wsum / total.count)
                    << " max=" << total.wmax << " height min=" << total.hmin
                    << " mean=" << format_double(total.hsum / total.count)
                    << " max=" << total.hmax;
            out << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_tolibsvm(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"dump a feature file in libSVM sparse format on standard output"};
    app.name("imclass tolibsvm");
    use_long_help(app);

    std::string dataset;
    app.add_option("-d", dataset, "feature file")->required();

    if (auto code = finish_parse(app, args, out, err)) return *code;

    try {
        export_libsvm(out, read_featureset(dataset));
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const char* const usage =
        "usage: imclass <command> [options]\n"
        "commands:\n"
        "  train       train / cross-validate an SVM on a feature file\n"
        "  predict     classify a feature file with a saved model\n"
        "  genfeature  extract descriptors from images into a feature file\n"
        "  stats       image statistics over a labeled directory\n"
        "  tolibsvm    export a feature file in libSVM format\n"
        "run 'imclass <command> --help' for details\n";
    if (args.empty()) {
        err << usage;
        return 2;
    }
    const std::string& cmd = args[0];
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (cmd == "train") return run_train(rest, out, err);
    if (cmd == "predict") return run_predict(rest, out, err);
    if (cmd == "genfeature") return run_genfeature(rest, out, err);
    if (cmd == "stats") return run_stats(rest, out, err);
    if (cmd == "tolibsvm") return run_tolibsvm(rest, out, err);
    if (cmd == "--help" || cmd == "help") {
        out << usage;
        return 0;
    }
    err << "unknown command '" << cmd << "'\n" << usage;
    return 2;
}

}  // namespace imclass::cli
