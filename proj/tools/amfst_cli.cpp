// amfst: command-line driver for synthetic benchmarks, tracking runs, evaluation and query initialization.
//
// Exit codes: 0 ok, 2 bad configuration, 3 missing input, 4 misaligned inputs, 5 degenerate data.

#include "amfst/amfst.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kBadConfig = 2, kMissingInput = 3, kMisaligned = 4, kDegenerate = 5 };

struct DegenerateData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BackendKind { oracle, oracle_noisy, block_matching };

BackendKind parse_backend_kind(const std::string& name) {
    if (name == "oracle") return BackendKind::oracle;
    if (name == "oracle-noisy") return BackendKind::oracle_noisy;
    if (name == "block-matching") return BackendKind::block_matching;
    throw amfst::InvalidInput("unknown backend '" + name + "' (expected oracle, oracle-noisy or block-matching)");
}

/// One tracking run. Populated from an optional JSON file, then overridden by explicit flags.
struct RunConfig {
    std::string           label;
    std::string           tracker = "amfst";
    std::string           backend = "oracle";
    std::optional<double> tau;
    std::size_t           nf         = 6;
    std::size_t           combo_size = 0;
    std::vector<int>      intervals{1, 2, 4, 8, 16, 32};
    double                sigma = 0.5;
    std::uint64_t         seed  = 0;
    std::string           frames, masks, queries, gt, scene, out;

    [[nodiscard]] json echo(double resolved_tau) const {
        return {{"tracker", tracker},  {"backend", backend},       {"tau", resolved_tau},
                {"nf", nf},            {"combo_size", combo_size}, {"intervals", intervals},
                {"sigma", sigma},      {"seed", seed},             {"frames", frames},
                {"masks", masks},      {"queries", queries},       {"scene", scene}};
    }
};

void apply_json(RunConfig& c, const json& j) {
    c.label      = j.value("label", c.label);
    c.tracker    = j.value("tracker", c.tracker);
    c.backend    = j.value("backend", c.backend);
    if (j.contains("tau") && !j.at("tau").is_null()) c.tau = j.at("tau").get<double>();
    c.nf         = j.value("nf", c.nf);
    c.combo_size = j.value("combo_size", c.combo_size);
    c.intervals  = j.value("intervals", c.intervals);
    c.sigma      = j.value("sigma", c.sigma);
    c.seed       = j.value("seed", c.seed);
    c.frames     = j.value("frames", c.frames);
    c.masks      = j.value("masks", c.masks);
    c.queries    = j.value("queries", c.queries);
    c.gt         = j.value("gt", c.gt);
    c.scene      = j.value("scene", c.scene);
    c.out        = j.value("out", c.out);
}

/// CLI11 bindings for the shared run flags; `given()` applies only flags present on the command line.
struct RunFlags {
    RunConfig                                 values;
    std::map<std::string, const CLI::Option*> options;

    void bind(CLI::App& app, bool with_tracker) {
        if (with_tracker) {
            options["tracker"] = app.add_option("--tracker", values.tracker, "chain | mfst | amfst");
        }
        options["backend"]    = app.add_option("--backend", values.backend, "oracle | oracle-noisy | block-matching");
        options["tau"]        = app.add_option("--tau", tau_value, "forward-backward EPE occlusion threshold (px)");
        options["nf"]         = app.add_option("--nf", values.nf, "A-MFST reliable frame count");
        options["combo_size"] = app.add_option("--combo-size", values.combo_size, "A-MFST combination size N (0 = n_f)");
        options["intervals"]  = app.add_option("--intervals", values.intervals, "MFST back-check offsets")->delimiter(',');
        options["sigma"]      = app.add_option("--sigma", values.sigma, "noise std of the oracle-noisy backend (px)");
        options["seed"]       = app.add_option("--seed", values.seed, "noise seed");
        options["frames"]     = app.add_option("--frames", values.frames, "directory of numbered frame PNGs");
        options["masks"]      = app.add_option("--masks", values.masks, "directory of numbered instrument masks");
        options["queries"]    = app.add_option("--queries", values.queries, "query points CSV (x,y)");
        options["scene"]      = app.add_option("--scene", values.scene, "synthetic scene config JSON");
    }

    [[nodiscard]] bool has(const std::string& key) const {
        const auto it = options.find(key);
        return it != options.end() && it->second->count() > 0;
    }

    void overlay(RunConfig& c) const {
        if (has("tracker")) c.tracker = values.tracker;
        if (has("backend")) c.backend = values.backend;
        if (has("tau")) c.tau = tau_value;
        if (has("nf")) c.nf = values.nf;
        if (has("combo_size")) c.combo_size = values.combo_size;
        if (has("intervals")) c.intervals = values.intervals;
        if (has("sigma")) c.sigma = values.sigma;
        if (has("seed")) c.seed = values.seed;
        if (has("frames")) c.frames = values.frames;
        if (has("masks")) c.masks = values.masks;
        if (has("queries")) c.queries = values.queries;
        if (has("scene")) c.scene = values.scene;
    }

    double tau_value = 0.0;
};

/// Everything needed to feed a tracker one sequence.
class LoadedRun {
  public:
    explicit LoadedRun(const RunConfig& config) : config_(config) {
        const BackendKind kind = parse_backend_kind(config.backend);
        if (!config.scene.empty()) {
            scene_.emplace(amfst::read_json_file(config.scene).get<amfst::SceneConfig>());
        }
        if (!config.frames.empty()) {
            frame_paths_ = amfst::list_numbered_pngs(config.frames);
        }
        switch (kind) {
            case BackendKind::oracle:
            case BackendKind::oracle_noisy: {
                if (!scene_) {
                    throw amfst::InvalidInput("oracle backends need --scene");
                }
                const double sigma = kind == BackendKind::oracle ? 0.0 : config.sigma;
                auto         owned = amfst::oracle_with_noise(*scene_, sigma, config.seed);
                oracle_            = owned.get();
                backend_           = std::move(owned);
                frame_count_       = scene_->frame_count();
                width_             = scene_->width();
                height_            = scene_->height();
                break;
            }
            case BackendKind::block_matching: {
                if (frame_paths_.empty()) {
                    throw amfst::InvalidInput("block-matching backend needs --frames");
                }
                backend_           = std::make_unique<amfst::BlockMatchingBackend>();
                const auto first   = amfst::read_gray_png(frame_paths_.front());
                frame_count_       = static_cast<int>(frame_paths_.size());
                width_             = first.width();
                height_            = first.height();
                break;
            }
        }
        if (!config.masks.empty()) {
            masks_ = amfst::load_mask_sequence(config.masks);
            if (static_cast<int>(masks_->size()) < frame_count_) {
                throw amfst::Misaligned("mask sequence has " + std::to_string(masks_->size()) +
                                        " frames, video has " + std::to_string(frame_count_));
            }
            if (masks_->at(0).width() != width_ || masks_->at(0).height() != height_) {
                throw amfst::Misaligned("mask dimensions differ from the frames");
            }
        }
        if (!config.queries.empty()) {
            queries_ = amfst::read_queries_csv(config.queries);
        } else if (scene_) {
            queries_ = scene_->ground_truth().positions.front();
        } else {
            throw amfst::InvalidInput("no query points: pass --queries or --scene");
        }
    }

    [[nodiscard]] amfst::FeatureSource features() const {
        if (oracle_ != nullptr) {
            return [this](int t) { return oracle_->features_at(t); };
        }
        return [this](int t) {
            return backend_->extract_features(amfst::read_gray_png(frame_paths_.at(static_cast<std::size_t>(t))), t);
        };
    }

    [[nodiscard]] amfst::MaskSource masks() const {
        if (!masks_) {
            return {};
        }
        return [this](int t) { return &masks_->at(static_cast<std::size_t>(t)); };
    }

    [[nodiscard]] double tau() const {
        return config_.tau.value_or(amfst::default_tau(width_, height_));
    }

    [[nodiscard]] amfst::TrackerParams params() const {
        amfst::TrackerParams p;
        p.kind       = amfst::parse_tracker_kind(config_.tracker);
        p.tau        = tau();
        p.n_f        = config_.nf;
        p.combo_size = config_.combo_size;
        p.intervals  = config_.intervals;
        return p;
    }

    [[nodiscard]] amfst::RunResult run() const {
        return amfst::run_tracker(params(), *backend_, features(), masks(), frame_count_, queries_);
    }

    [[nodiscard]] const amfst::FlowBackend&   backend() const { return *backend_; }
    [[nodiscard]] const std::optional<amfst::Scene>& scene() const { return scene_; }
    [[nodiscard]] const RunConfig&           config() const { return config_; }
    [[nodiscard]] int                        frame_count() const { return frame_count_; }

    /// Ground truth from --gt, else the scene's.
    [[nodiscard]] amfst::GroundTruth truth(const std::string& gt_path) const {
        if (!gt_path.empty()) {
            return amfst::ground_truth_from_json(amfst::read_json_file(gt_path));
        }
        if (scene_) {
            return scene_->ground_truth();
        }
        throw amfst::InvalidInput("no ground truth: pass --gt or --scene");
    }

  private:
    RunConfig                           config_;
    std::optional<amfst::Scene>         scene_;
    std::unique_ptr<amfst::FlowBackend> backend_;
    const amfst::OracleBackend*         oracle_ = nullptr;
    std::vector<fs::path>               frame_paths_;
    std::optional<amfst::MaskSequence>  masks_;
    std::vector<amfst::Point2>          queries_;
    int                                 frame_count_ = 0;
    int                                 width_       = 0;
    int                                 height_      = 0;
};

RunConfig resolve_run(const std::string& config_file, const RunFlags& flags) {
    RunConfig config;
    if (!config_file.empty()) {
        apply_json(config, amfst::read_json_file(config_file));
    }
    flags.overlay(config);
    return config;
}

void emit_json(const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        amfst::write_json_file(path, j);
    }
}

std::string curve_csv(const std::vector<std::string>& names,
                      const std::vector<std::vector<std::pair<int, double>>>& curves) {
    std::map<int, std::vector<std::optional<double>>> rows;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (const auto& [t, v] : curves[c]) {
            auto& row = rows[t];
            row.resize(curves.size());
            row[c] = v;
        }
    }
    std::ostringstream out;
    out << "t";
    for (const auto& n : names) {
        out << ',' << n;
    }
    out << '\n' << std::setprecision(10);
    for (auto& [t, row] : rows) {
        row.resize(curves.size());
        out << t;
        for (const auto& v : row) {
            out << ',';
            if (v) out << *v;
        }
        out << '\n';
    }
    return out.str();
}

// Subcommands ----------------------------------------------------------------------------------------

int cmd_track(const RunConfig& config) {
    const LoadedRun run(config);
    const auto      result = run.run();

    amfst::Trajectory trajectory;
    trajectory.config = run.config().echo(run.tau());
    trajectory.frames = result.frames;
    emit_json(config.out, amfst::trajectory_to_json(trajectory));

    std::size_t occluded = 0;
    for (const auto& p : result.frames.back().points) {
        occluded += p.occluded ? 1 : 0;
    }
    std::cerr << config.tracker << ": " << result.frames.size() << " frames, " << result.frames.back().points.size()
              << " points, " << occluded << " occluded at the last frame, mean step "
              << amfst::mean_of(result.step_ms) << " ms\n";
    return kOk;
}

int cmd_evaluate(const std::string& trajectory_path, const std::string& gt_path, const std::string& out,
                 const std::string& curve_path) {
    const auto trajectory = amfst::trajectory_from_json(amfst::read_json_file(trajectory_path));
    const auto truth      = amfst::ground_truth_from_json(amfst::read_json_file(gt_path));
    const auto report     = amfst::evaluate_against_truth(trajectory.frames, truth);
    json       j          = amfst::report_to_json(report);
    j["version"]          = amfst::kFormatVersion;
    emit_json(out, j);
    if (!curve_path.empty()) {
        amfst::write_text_file(curve_path, curve_csv({"mee_px"}, {report.mee_by_duration}));
    }
    return kOk;
}

int cmd_synth(const std::string& scene_path, const std::string& out_dir, bool write_frames) {
    const amfst::Scene scene(amfst::read_json_file(scene_path).get<amfst::SceneConfig>());
    const fs::path     root(out_dir);
    fs::create_directories(root / "masks");
    const int pad = std::max(3, static_cast<int>(std::to_string(scene.frame_count() - 1).size()));
    for (int t = 0; t < scene.frame_count(); ++t) {
        const amfst::Mask* mask = scene.mask_at(t);
        amfst::write_mask_png(root / "masks" / amfst::sequence_file_name(t, pad),
                              mask != nullptr ? *mask : amfst::Mask(scene.width(), scene.height()));
    }
    if (write_frames) {
        fs::create_directories(root / "frames");
        for (int t = 0; t < scene.frame_count(); ++t) {
            amfst::write_gray_png(root / "frames" / amfst::sequence_file_name(t, pad), amfst::render_frame(scene, t));
        }
    }
    amfst::write_json_file(root / "ground_truth.json", amfst::ground_truth_to_json(scene.ground_truth()));
    amfst::write_json_file(root / "scene.json", json(scene.config()));
    amfst::write_text_file(root / "queries.csv", amfst::format_queries_csv(scene.ground_truth().positions.front()));
    std::cerr << "wrote " << scene.frame_count() << " frames of " << scene.width() << "x" << scene.height() << " with "
              << scene.ground_truth().point_count() << " points to " << root.string() << '\n';
    return kOk;
}

struct InitQueriesOptions {
    std::string           left, right, out;
    std::size_t           k = 5;
    std::optional<double> min_disp, max_disp;
    int                   search_max = 64;
    std::size_t           max_points = 2000;
};

int cmd_init_queries(const InitQueriesOptions& o) {
    const auto left  = amfst::read_gray_png(o.left);
    const auto right = amfst::read_gray_png(o.right);
    if (left.width() != right.width() || left.height() != right.height()) {
        throw amfst::Misaligned("stereo images have different dimensions");
    }
    amfst::DisparityParams dp;
    dp.max_disparity = o.search_max;
    const auto map   = amfst::compute_disparity(left, right, dp);

    std::pair<double, double> range;
    if (o.min_disp && o.max_disp) {
        range = {*o.min_disp, *o.max_disp};
    } else if (o.min_disp || o.max_disp) {
        throw amfst::InvalidInput("give both --min-disp and --max-disp, or neither for the automatic range");
    } else {
        try {
            range = amfst::auto_disparity_range(map);
        } catch (const amfst::InvalidInput& e) {
            throw DegenerateData(std::string(e.what()) + "; pass --min-disp/--max-disp");
        }
    }
    std::cout << "disparity range: [" << range.first << ", " << range.second << "]\n";
    const auto foreground = amfst::threshold_foreground(map, range.first, range.second);
    if (foreground.empty()) {
        throw DegenerateData("no foreground pixels in the disparity range; adjust --min-disp/--max-disp manually");
    }
    if (o.k > foreground.size()) {
        throw DegenerateData("k = " + std::to_string(o.k) + " exceeds the " + std::to_string(foreground.size()) +
                             " foreground pixels; adjust the disparity range or k");
    }
    const auto sample = amfst::stride_subsample(foreground, o.max_points);
    const auto result = amfst::kmedoids(sample, o.k);
    if (o.out.empty()) {
        std::cout << amfst::format_queries_csv(result.medoids);
    } else {
        amfst::write_text_file(o.out, amfst::format_queries_csv(result.medoids));
    }
    return kOk;
}

int cmd_compare(const std::vector<std::string>& config_files, const std::string& trackers, const RunFlags& flags,
                const std::string& gt_path, const std::string& out, const std::string& curves_path) {
    std::vector<RunConfig> runs;
    for (const auto& file : config_files) {
        runs.push_back(resolve_run(file, flags));
    }
    if (!trackers.empty()) {
        std::stringstream list(trackers);
        std::string       name;
        while (std::getline(list, name, ',')) {
            RunConfig c = resolve_run("", flags);
            c.tracker   = name;
            runs.push_back(c);
        }
    }
    if (runs.empty()) {
        throw amfst::InvalidInput("compare needs --run files or --trackers");
    }
    for (const auto& r : runs) {
        if (r.scene != runs.front().scene || r.frames != runs.front().frames) {
            throw amfst::Misaligned("compared runs use different scenes or frame directories");
        }
    }

    json                                              rows = json::array();
    std::vector<std::string>                          names;
    std::vector<std::vector<std::pair<int, double>>> curves;
    std::map<std::string, int>                        seen;
    for (const auto& config : runs) {
        const LoadedRun run(config);
        const auto      result = run.run();
        const auto      truth  = run.truth(gt_path.empty() ? config.gt : gt_path);
        const auto      report = amfst::evaluate_against_truth(result.frames, truth);
        std::string     name   = config.label.empty() ? config.tracker : config.label;
        if (++seen[name] > 1) {
            name += "#" + std::to_string(seen[name]);
        }
        names.push_back(name);
        curves.push_back(report.mee_by_duration);
        rows.push_back({{"name", name},
                        {"tracker", config.tracker},
                        {"backend", config.backend},
                        {"tau", run.tau()},
                        {"mee_px", report.mee_px},
                        {"mcd_px", report.mcd_px},
                        {"delta_avg", report.delta_avg},
                        {"delta64_occluded",
                         report.delta64_occluded ? json(*report.delta64_occluded) : json(nullptr)},
                        {"latency_ms_mean", amfst::mean_of(result.step_ms)},
                        {"latency_ms_p95", amfst::p95_of(result.step_ms)}});
        std::cerr << name << ": MEE " << report.mee_px << " px, MCD " << report.mcd_px << " px, delta_avg "
                  << report.delta_avg << ", " << amfst::mean_of(result.step_ms) << " ms/frame\n";
    }
    emit_json(out, {{"version", amfst::kFormatVersion}, {"rows", rows}});
    if (!curves_path.empty()) {
        amfst::write_text_file(curves_path, curve_csv(names, curves));
    }
    return kOk;
}

int cmd_calibrate_tau(const std::vector<std::string>& scenes, const RunFlags& flags, double target_fpr) {
    RunConfig config = resolve_run("", flags);
    if (parse_backend_kind(config.backend) == BackendKind::block_matching) {
        throw amfst::InvalidInput("calibrate-tau supports the oracle backends");
    }
    std::vector<amfst::Scene> loaded;
    for (const auto& path : scenes) {
        loaded.emplace_back(amfst::read_json_file(path).get<amfst::SceneConfig>());
    }
    if (!(target_fpr > 0.0 && target_fpr < 1.0)) {
        throw amfst::InvalidInput("--target-fpr must lie in (0, 1)");
    }
    const double        sigma = config.backend == "oracle" ? 0.0 : config.sigma;
    std::vector<double> samples;
    for (const auto& scene : loaded) {
        const auto backend = amfst::oracle_with_noise(scene, sigma, config.seed);
        const auto seq     = amfst::oracle_calibration_sequence(*backend, scene);
        const auto part    = amfst::consecutive_epe_samples(*backend, seq);
        samples.insert(samples.end(), part.begin(), part.end());
    }
    if (samples.empty()) {
        throw DegenerateData("no visible samples to calibrate tau");
    }
    const double tau = amfst::quantile(samples, 1.0 - target_fpr);
    std::cout << json{{"tau", tau}, {"target_fpr", target_fpr}, {"samples", samples.size()}}.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Occlusion-aware sparse point tracking (chain / MFST / A-MFST)"};
    app.require_subcommand(1);

    // track
    auto*       track = app.add_subcommand("track", "track query points through a sequence");
    RunFlags    track_flags;
    std::string track_config, track_out;
    track->add_option("--config", track_config, "run config JSON (flags override it)");
    track->add_option("--out", track_out, "trajectory JSON (default stdout)");
    track_flags.bind(*track, true);

    // evaluate
    auto*       evaluate = app.add_subcommand("evaluate", "score a trajectory against ground truth");
    std::string eval_traj, eval_gt, eval_out, eval_curve;
    evaluate->add_option("--trajectory", eval_traj, "trajectory JSON")->required();
    evaluate->add_option("--gt", eval_gt, "ground truth JSON")->required();
    evaluate->add_option("--out", eval_out, "metrics report JSON (default stdout)");
    evaluate->add_option("--curve-csv", eval_curve, "MEE-over-duration CSV");

    // synth
    auto*       synth = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
    std::string synth_scene, synth_out;
    bool        synth_no_frames = false;
    synth->add_option("--scene", synth_scene, "scene config JSON")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_flag("--no-frames", synth_no_frames, "skip rendering frame images");

    // init-queries
    auto*              init = app.add_subcommand("init-queries", "pick instrument query points from a stereo pair");
    InitQueriesOptions init_opts;
    init->add_option("--left", init_opts.left, "left rectified image")->required();
    init->add_option("--right", init_opts.right, "right rectified image")->required();
    init->add_option("--k", init_opts.k, "number of medoids");
    init->add_option("--min-disp", init_opts.min_disp, "lower disparity bound (px)");
    init->add_option("--max-disp", init_opts.max_disp, "upper disparity bound (px)");
    init->add_option("--search", init_opts.search_max, "largest disparity searched");
    init->add_option("--max-points", init_opts.max_points, "foreground subsample size for PAM (0 = all)");
    init->add_option("--out", init_opts.out, "queries CSV (default stdout)");

    // compare
    auto*                    compare = app.add_subcommand("compare", "run several trackers on one scene");
    RunFlags                 compare_flags;
    std::vector<std::string> compare_runs;
    std::string              compare_trackers, compare_gt, compare_out, compare_curves;
    compare->add_option("--run", compare_runs, "run config JSON (repeatable)");
    compare->add_option("--trackers", compare_trackers, "comma-separated tracker kinds sharing the flags below");
    compare->add_option("--gt", compare_gt, "ground truth JSON (default: the scene's)");
    compare->add_option("--out", compare_out, "combined report JSON (default stdout)");
    compare->add_option("--curves", compare_curves, "per-method MEE-over-duration CSV");
    compare_flags.bind(*compare, false);

    // calibrate-tau
    auto*                    calibrate = app.add_subcommand("calibrate-tau", "estimate tau from occlusion-free scenes");
    RunFlags                 calibrate_flags;
    std::vector<std::string> calibrate_scenes;
    double                   target_fpr = 0.01;
    calibrate->add_option("--scenes", calibrate_scenes, "scene config JSON files")->required();
    calibrate->add_option("--target-fpr", target_fpr, "fraction of visible samples allowed above tau");
    calibrate_flags.bind(*calibrate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadConfig;
    }

    try {
        if (track->parsed()) {
            RunConfig config = resolve_run(track_config, track_flags);
            if (!track_out.empty()) config.out = track_out;
            return cmd_track(config);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_traj, eval_gt, eval_out, eval_curve);
        }
        if (synth->parsed()) {
            return cmd_synth(synth_scene, synth_out, !synth_no_frames);
        }
        if (init->parsed()) {
            return cmd_init_queries(init_opts);
        }
        if (compare->parsed()) {
            return cmd_compare(compare_runs, compare_trackers, compare_flags, compare_gt, compare_out, compare_curves);
        }
        if (calibrate->parsed()) {
            return cmd_calibrate_tau(calibrate_scenes, calibrate_flags, target_fpr);
        }
    } catch (const amfst::MissingInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissingInput;
    } catch (const amfst::Misaligned& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMisaligned;
    } catch (const DegenerateData& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const amfst::UndefinedMetric& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const amfst::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << '\n';
        return kBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
