#include "potvid/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "potvid/errors.hpp"
#include "potvid/flow_color.hpp"
#include "potvid/flow_io.hpp"
#include "potvid/matrix_io.hpp"
#include "potvid/pipeline.hpp"

namespace potvid {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_double_value(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
}

long long parse_int_value(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
}

bool parse_bool_value(const std::string& key, const std::string& text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "1" || lower == "true" || lower == "on") return true;
    if (lower == "0" || lower == "false" || lower == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + text + "'");
}

// Keys a --config file may carry. Each subcommand honours the subset it
// also exposes as flags; anything outside this list is a typo.
const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "alpha",          "iters",    "tol",   "threads",
        "cells-x",        "cells-y",  "orientation-bins",
        "mean-color",     "pyramid-levels",    "operators",
        "kernel",         "gamma",    "c-reg", "seed",
        "normalize-streams",
    };
    return keys;
}

std::map<std::string, std::string> parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        if (!known_config_keys().count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
        values[key] = trim(stripped.substr(eq + 1));
    }
    return values;
}

// Ties a flag to its config-file key. Defaults < config file < explicit
// flag: a file value is applied only when the flag was not given.
class ConfigBinder {
public:
    explicit ConfigBinder(CLI::App* cmd) : cmd_(cmd) {
        cmd->add_option("--config", config_path_,
                        "key=value file applied where no explicit flag is given");
    }

    void bind_double(const std::string& flag, const std::string& key, double& var,
                     const std::string& help) {
        add(key, option(flag, var, help), [&var, key](const std::string& text) {
            var = parse_double_value(key, text);
        });
    }

    void bind_int(const std::string& flag, const std::string& key, int& var,
                  const std::string& help) {
        add(key, option(flag, var, help), [&var, key](const std::string& text) {
            var = static_cast<int>(parse_int_value(key, text));
        });
    }

    void bind_uint64(const std::string& flag, const std::string& key,
                     std::uint64_t& var, const std::string& help) {
        add(key, option(flag, var, help), [&var, key](const std::string& text) {
            var = static_cast<std::uint64_t>(parse_int_value(key, text));
        });
    }

    void bind_string(const std::string& flag, const std::string& key, std::string& var,
                     const std::string& help) {
        add(key, option(flag, var, help),
            [&var](const std::string& text) { var = text; });
    }

    void bind_flag(const std::string& flag_spec, const std::string& key, bool& var,
                   const std::string& help) {
        add(key, cmd_->add_flag(flag_spec, var, help), [&var, key](const std::string& text) {
            var = parse_bool_value(key, text);
        });
    }

    void apply_file() const {
        if (config_path_.empty()) return;
        const auto values = parse_config_file(config_path_);
        for (const auto& [key, text] : values)
            for (const auto& binding : bindings_)
                if (binding.key == key && binding.flag->count() == 0) binding.apply(text);
    }

private:
    struct Binding {
        std::string key;
        CLI::Option* flag;
        std::function<void(const std::string&)> apply;
    };

    template <typename T>
    CLI::Option* option(const std::string& flag, T& var, const std::string& help) {
        return cmd_->add_option(flag, var, help)->capture_default_str();
    }

    void add(std::string key, CLI::Option* flag,
             std::function<void(const std::string&)> apply) {
        bindings_.push_back({std::move(key), flag, std::move(apply)});
    }

    CLI::App* cmd_;
    std::string config_path_;
    std::vector<Binding> bindings_;
};

// Every tunable a subcommand might expose; each binds only its own groups.
struct Settings {
    HSParams flow;
    int threads = 0;
    int cells_x = 4;
    int cells_y = 4;
    int orientation_bins = 8;
    bool mean_color = true;
    int pyramid_levels = kThirdPersonLevels;
    std::string operators = "max,sum,grad_pos,grad_neg,var";
    std::string kernel = "chi2";
    std::string gamma = "auto";
    double c_reg = 1.0;
    std::uint64_t seed = 0;
    bool normalize_streams = false;

    DescriptorSpec descriptor() const {
        DescriptorSpec spec;
        spec.cells_x = cells_x;
        spec.cells_y = cells_y;
        spec.orientation_bins = orientation_bins;
        spec.include_mean_color = mean_color;
        return spec;
    }

    PipelineConfig pipeline() const {
        PipelineConfig config;
        config.flow = flow;
        config.flow_threads = threads;
        config.motion_descriptor = descriptor();
        config.appearance_descriptor = descriptor();
        config.pyramid.levels = pyramid_levels;
        config.pyramid.operators = pool_ops_from_list(operators);
        config.kernel.kind = kernel_kind_from_name(kernel);
        if (gamma != "auto")
            config.kernel.gamma = parse_double_value("gamma", gamma);
        config.train.c_reg = c_reg;
        config.train.seed = seed;
        config.l1_normalize_streams = normalize_streams;
        return config;
    }
};

void add_flow_flags(ConfigBinder& bind, Settings& s) {
    bind.bind_double("--alpha", "alpha", s.flow.alpha, "smoothness weight, > 0");
    bind.bind_int("--iters", "iters", s.flow.max_iters, "solver iteration cap");
    bind.bind_double("--tol", "tol", s.flow.tol,
                     "mean-update stop threshold, 0 disables");
    bind.bind_int("--threads", "threads", s.threads,
                  "row-parallel solver threads, 0 means one");
}

void add_descriptor_flags(ConfigBinder& bind, Settings& s) {
    bind.bind_int("--cells-x", "cells-x", s.cells_x, "descriptor grid columns");
    bind.bind_int("--cells-y", "cells-y", s.cells_y, "descriptor grid rows");
    bind.bind_int("--orientation-bins", "orientation-bins", s.orientation_bins,
                  "gradient orientation bins per cell");
    bind.bind_flag("--mean-color,!--no-mean-color", "mean-color", s.mean_color,
                   "append per-cell mean RGB");
}

void add_pyramid_flags(ConfigBinder& bind, Settings& s) {
    bind.bind_int("--pyramid-levels", "pyramid-levels", s.pyramid_levels,
                  "temporal pyramid levels");
    bind.bind_string("--operators", "operators", s.operators,
                     "comma list from max,sum,grad_pos,grad_neg,var");
}

void add_svm_flags(ConfigBinder& bind, Settings& s) {
    bind.bind_string("--kernel", "kernel", s.kernel, "linear or chi2");
    bind.bind_string("--gamma", "gamma", s.gamma,
                     "chi2 gamma, or 'auto' for 1/mean pairwise distance");
    bind.bind_double("--c-reg", "c-reg", s.c_reg, "SVM regularization C");
    bind.bind_uint64("--seed", "seed", s.seed, "seed for training and splits");
    bind.bind_flag("--normalize-streams", "normalize-streams", s.normalize_streams,
                   "L1-normalize each stream before concatenation");
}

// ---- output helpers ----------------------------------------------------

std::string fixed(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
    return buffer;
}

void ensure_parent(const fs::path& path) {
    const auto parent = path.parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string joined;
    for (const auto& part : parts) {
        if (!joined.empty()) joined += sep;
        joined += part;
    }
    return joined;
}

void print_eval_tables(std::ostream& out, const EvalReport& report) {
    const std::size_t total = std::accumulate(report.confusion.begin(),
                                              report.confusion.end(), std::size_t{0});
    out << "accuracy " << fixed(report.accuracy, 4) << " over " << total
        << " predictions\n\n";

    std::size_t label_w = 5;  // "class"
    for (const auto& label : report.classes) label_w = std::max(label_w, label.size());

    out << std::left << std::setw(static_cast<int>(label_w + 2)) << "class"
        << std::right << std::setw(10) << "precision" << std::setw(8) << "recall"
        << std::setw(8) << "f1" << "\n";
    for (std::size_t c = 0; c < report.classes.size(); ++c)
        out << std::left << std::setw(static_cast<int>(label_w + 2))
            << report.classes[c] << std::right << std::setw(10)
            << fixed(report.precision[c], 4) << std::setw(8)
            << fixed(report.recall[c], 4) << std::setw(8) << fixed(report.f1[c], 4)
            << "\n";

    out << "\nconfusion (rows: truth, columns: predicted)\n";
    std::size_t cell_w = 5;
    for (const auto& label : report.classes) cell_w = std::max(cell_w, label.size() + 1);
    out << std::setw(static_cast<int>(label_w + 2)) << "";
    for (const auto& label : report.classes)
        out << std::right << std::setw(static_cast<int>(cell_w)) << label;
    out << "\n";
    for (std::size_t t = 0; t < report.classes.size(); ++t) {
        out << std::left << std::setw(static_cast<int>(label_w + 2)) << report.classes[t]
            << std::right;
        for (std::size_t p = 0; p < report.classes.size(); ++p)
            out << std::setw(static_cast<int>(cell_w)) << report.confusion_at(t, p);
        out << "\n";
    }
    out << "\n";
}

void print_eval_block(std::ostream& out, const EvalReport& report,
                      const std::string& command, const std::string& protocol,
                      int runs, const Settings& settings) {
    const std::size_t total = std::accumulate(report.confusion.begin(),
                                              report.confusion.end(), std::size_t{0});
    out << "[report]\n";
    out << "command=" << command << "\n";
    out << "protocol=" << protocol << "\n";
    if (protocol == "split") {
        out << "runs=" << runs << "\n";
        out << "seed=" << settings.seed << "\n";
    }
    out << "predictions=" << total << "\n";
    out << "classes=" << join(report.classes, ',') << "\n";
    out << "operators=" << settings.operators << "\n";
    out << "pyramid_windows=" << ((1u << settings.pyramid_levels) - 1) << "\n";
    out << "accuracy=" << fixed(report.accuracy, 6) << "\n";
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        const auto& label = report.classes[c];
        out << "precision_" << label << "=" << fixed(report.precision[c], 6) << "\n";
        out << "recall_" << label << "=" << fixed(report.recall[c], 6) << "\n";
        out << "f1_" << label << "=" << fixed(report.f1[c], 6) << "\n";
    }
    for (std::size_t t = 0; t < report.classes.size(); ++t)
        for (std::size_t p = 0; p < report.classes.size(); ++p)
            out << "confusion_" << report.classes[t] << "_" << report.classes[p] << "="
                << report.confusion_at(t, p) << "\n";
    for (std::size_t i = 0; i < report.run_accuracies.size(); ++i)
        out << "run_accuracy_" << (i + 1) << "="
            << fixed(report.run_accuracies[i], 6) << "\n";
}

// ---- subcommand bodies ---------------------------------------------------

int run_flow(const Settings& settings, const std::string& frames_dir,
             const std::string& out_dir, std::ostream& out) {
    const auto frames = read_frame_directory(frames_dir);
    std::vector<GrayFrame> gray;
    gray.reserve(frames.size());
    for (const auto& frame : frames) gray.push_back(to_luminance(frame));

    const auto fields = flow_sequence(gray, settings.flow, settings.threads);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "flow_%04zu.flo", i);
        write_flo(fields[i], fs::path(out_dir) / name);
    }
    out << "wrote " << fields.size() << " flow fields to " << out_dir << "\n";
    out << "[report]\ncommand=flow\nfields=" << fields.size()
        << "\nwidth=" << fields.front().width << "\nheight=" << fields.front().height
        << "\n";
    return 0;
}

int run_flow_viz(const std::string& flo_path, const std::string& ppm_path,
                 std::optional<double> max_radius, std::ostream& out) {
    const auto field = read_flo(flo_path);
    const auto image = flow_to_color(field, max_radius);
    ensure_parent(ppm_path);
    write_ppm(image, ppm_path);
    out << "wrote " << ppm_path << "\n";
    out << "[report]\ncommand=flow-viz\nwidth=" << image.width
        << "\nheight=" << image.height << "\n";
    return 0;
}

int run_describe(const Settings& settings, const std::string& frames_dir,
                 const std::string& out_path, std::ostream& out) {
    const auto frames = read_frame_directory(frames_dir);
    const auto series = describe_sequence(frames, settings.descriptor());
    ensure_parent(out_path);
    save_descriptor_matrix(series, out_path);
    out << "wrote " << series.length() << " x " << series.channels()
        << " descriptor series to " << out_path << "\n";
    out << "[report]\ncommand=describe\nframes=" << series.length()
        << "\nchannels=" << series.channels() << "\n";
    return 0;
}

int run_encode(const Settings& settings, const std::string& in_path,
               const std::string& out_path, std::ostream& out) {
    const auto series = load_descriptor_matrix(in_path);
    PyramidConfig config;
    config.levels = settings.pyramid_levels;
    config.operators = pool_ops_from_list(settings.operators);
    const auto features = encode(series, config);
    ensure_parent(out_path);
    save_feature_vector(features, out_path);
    out << "wrote a " << features.size() << "-dimensional feature to " << out_path
        << "\n";
    out << "[report]\ncommand=encode\ndim=" << features.size()
        << "\npyramid_windows=" << ((1u << config.levels) - 1) << "\n";
    return 0;
}

int run_train(const Settings& settings, const std::string& manifest_path,
              const std::string& out_path, std::ostream& out) {
    const auto manifest = load_manifest(manifest_path);
    const auto config = settings.pipeline();

    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    features.reserve(manifest.entries.size());
    labels.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        features.push_back(entry_representation(entry, config));
        labels.push_back(entry.label);
    }

    const auto model = train(features, labels, config.train, config.kernel);
    ensure_parent(out_path);
    save_model(model, out_path);

    out << "trained on " << features.size() << " videos, " << model.classes.size()
        << " classes, " << model.vectors.size() << " support vectors -> " << out_path
        << "\n";
    out << "[report]\ncommand=train\nvideos=" << features.size()
        << "\nclasses=" << join(model.classes, ',') << "\ndim=" << model.dim
        << "\nvectors=" << model.vectors.size()
        << "\nkernel=" << kernel_kind_name(model.kernel.kind);
    if (model.kernel.kind == KernelKind::Chi2) {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.9g", model.kernel.gamma.value());
        out << "\ngamma=" << buffer;
    }
    out << "\n";
    return 0;
}

int run_eval(const Settings& settings, const std::string& manifest_path,
             const std::string& protocol, int runs, const std::string& features_out,
             const std::string& command, std::ostream& out) {
    if (protocol != "loocv" && protocol != "split")
        throw ConfigError("unknown protocol '" + protocol +
                          "' (expected loocv or split)");
    const auto manifest = load_manifest(manifest_path);
    const auto config = settings.pipeline();

    if (!features_out.empty()) {
        fs::create_directories(features_out);
        for (const auto& entry : manifest.entries)
            save_feature_vector(entry_representation(entry, config),
                                fs::path(features_out) / (entry.video_id + ".pmtx"));
        out << "wrote " << manifest.entries.size() << " feature files to "
            << features_out << "\n";
    }

    const EvalReport report = protocol == "loocv"
                                  ? run_loocv(manifest, config)
                                  : run_repeated_split(manifest, runs, settings.seed,
                                                       config);
    print_eval_tables(out, report);
    print_eval_block(out, report, command, protocol, runs, settings);
    return 0;
}

}  // namespace

int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"two-stream video classification: optical flow + pooled time series"};
    app.name("potvid");
    app.require_subcommand(1);

    Settings settings;

    auto* flow_cmd =
        app.add_subcommand("flow", "estimate dense optical flow for a frame directory");
    std::string flow_frames, flow_out;
    flow_cmd->add_option("frames", flow_frames, "directory of PGM/PPM frames")
        ->required();
    flow_cmd->add_option("output", flow_out, "directory for .flo fields")->required();
    ConfigBinder flow_bind(flow_cmd);
    add_flow_flags(flow_bind, settings);

    auto* viz_cmd = app.add_subcommand("flow-viz", "render a .flo field as a color PPM");
    std::string viz_in, viz_out;
    double viz_max = 0.0;
    viz_cmd->add_option("field", viz_in, ".flo input")->required();
    viz_cmd->add_option("output", viz_out, "PPM output")->required();
    auto* viz_max_opt = viz_cmd->add_option(
        "--max-radius", viz_max, "normalization radius (default: field maximum)");

    auto* describe_cmd = app.add_subcommand(
        "describe", "compute a grid descriptor series for a frame directory");
    std::string describe_frames, describe_out;
    describe_cmd->add_option("frames", describe_frames, "directory of PGM/PPM frames")
        ->required();
    describe_cmd->add_option("output", describe_out, "PMTX output path")->required();
    ConfigBinder describe_bind(describe_cmd);
    add_descriptor_flags(describe_bind, settings);

    auto* encode_cmd =
        app.add_subcommand("encode", "pool a PMTX descriptor series into one feature");
    std::string encode_in, encode_out;
    encode_cmd->add_option("series", encode_in, "PMTX descriptor series")->required();
    encode_cmd->add_option("output", encode_out, "PMTX feature output path")->required();
    ConfigBinder encode_bind(encode_cmd);
    add_pyramid_flags(encode_bind, settings);

    auto* train_cmd =
        app.add_subcommand("train", "train a kernel SVM over a dataset manifest");
    std::string train_manifest, train_out;
    train_cmd->add_option("manifest", train_manifest, "dataset manifest")->required();
    train_cmd->add_option("output", train_out, "PSVM model output path")->required();
    ConfigBinder train_bind(train_cmd);
    add_flow_flags(train_bind, settings);
    add_descriptor_flags(train_bind, settings);
    add_pyramid_flags(train_bind, settings);
    add_svm_flags(train_bind, settings);

    std::string protocol = "loocv";
    int runs = 100;

    auto* eval_cmd =
        app.add_subcommand("eval", "run an evaluation protocol over a manifest");
    std::string eval_manifest;
    eval_cmd->add_option("manifest", eval_manifest, "dataset manifest")->required();
    eval_cmd->add_option("--protocol", protocol, "loocv or split")
        ->capture_default_str();
    eval_cmd->add_option("--runs", runs, "split repetitions")->capture_default_str();
    ConfigBinder eval_bind(eval_cmd);
    add_flow_flags(eval_bind, settings);
    add_descriptor_flags(eval_bind, settings);
    add_pyramid_flags(eval_bind, settings);
    add_svm_flags(eval_bind, settings);

    auto* pipeline_cmd = app.add_subcommand(
        "pipeline", "full two-stream pipeline: features plus an evaluation report");
    std::string pipeline_manifest, features_out;
    pipeline_cmd->add_option("manifest", pipeline_manifest, "dataset manifest")
        ->required();
    pipeline_cmd->add_option("--protocol", protocol, "loocv or split")
        ->capture_default_str();
    pipeline_cmd->add_option("--runs", runs, "split repetitions")
        ->capture_default_str();
    pipeline_cmd->add_option("--features-out", features_out,
                             "directory for per-video feature PMTX files");
    ConfigBinder pipeline_bind(pipeline_cmd);
    add_flow_flags(pipeline_bind, settings);
    add_descriptor_flags(pipeline_bind, settings);
    add_pyramid_flags(pipeline_bind, settings);
    add_svm_flags(pipeline_bind, settings);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'potvid --help' for usage\n";
        return 1;
    }

    try {
        if (*flow_cmd) {
            flow_bind.apply_file();
            return run_flow(settings, flow_frames, flow_out, out);
        }
        if (*viz_cmd) {
            std::optional<double> max_radius;
            if (viz_max_opt->count() > 0) max_radius = viz_max;
            return run_flow_viz(viz_in, viz_out, max_radius, out);
        }
        if (*describe_cmd) {
            describe_bind.apply_file();
            return run_describe(settings, describe_frames, describe_out, out);
        }
        if (*encode_cmd) {
            encode_bind.apply_file();
            return run_encode(settings, encode_in, encode_out, out);
        }
        if (*train_cmd) {
            train_bind.apply_file();
            return run_train(settings, train_manifest, train_out, out);
        }
        if (*eval_cmd) {
            eval_bind.apply_file();
            return run_eval(settings, eval_manifest, protocol, runs, "", "eval", out);
        }
        if (*pipeline_cmd) {
            pipeline_bind.apply_file();
            return run_eval(settings, pipeline_manifest, protocol, runs, features_out,
                            "pipeline", out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace potvid
