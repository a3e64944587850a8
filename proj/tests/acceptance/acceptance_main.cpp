// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include "amfst/amfst.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace amfst;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool        pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// Brute-force reference for the combination cost: every bitmask of size n, per-point minimum summed in
// point order. Returns the best total.
double brute_force_combination(const EpeMatrix& epe, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1U << epe.rows()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n) {
            continue;
        }
        double total = 0.0;
        for (std::size_t p = 0; p < epe.cols(); ++p) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < epe.rows(); ++f) {
                if ((mask >> f) & 1U) {
                    m = std::min(m, epe(f, p));
                }
            }
            total += m;
        }
        best = std::min(best, total);
    }
    return best;
}

Outcome selection_oracle_equivalence() {
    std::mt19937_64                        rng(2024);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::size_t                            mismatches = 0, loo_checked = 0;
    double                                 select_seconds = 0.0;
    const auto                             total_start    = Clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t rows = 1 + rng() % 8;
        const std::size_t cols = 1 + rng() % 50;
        EpeMatrix         epe(rows, cols);
        for (std::size_t f = 0; f < rows; ++f) {
            for (std::size_t p = 0; p < cols; ++p) {
                epe(f, p) = u(rng);
            }
        }
        std::vector<FrameId> ids(rows);
        std::iota(ids.begin(), ids.end(), 0);
        const std::size_t n = 1 + rng() % rows;

        auto start = Clock::now();
        const auto sel = select_optimal(epe, ids, n);
        select_seconds += seconds_since(start);
        if (sel.cost.total != brute_force_combination(epe, n)) {
            ++mismatches;
        }
        if (rows >= 2) {
            start = Clock::now();
            const auto loo = select_optimal(epe, ids, rows - 1, {}, {}, SelectionStrategy::leave_one_out);
            const auto ex  = select_optimal(epe, ids, rows - 1, {}, {}, SelectionStrategy::exhaustive);
            select_seconds += seconds_since(start);
            ++loo_checked;
            if (loo.cost.total != brute_force_combination(epe, rows - 1) || loo.best != ex.best) {
                ++mismatches;
            }
        }
    }
    const double total_seconds = seconds_since(total_start);
    return {mismatches == 0 && total_seconds < 2.0,
            fmt("1000 matrices + %zu leave-one-out checks, %zu mismatches, select_optimal %.3f s, total %.3f s "
                "(limit 2 s)",
                loo_checked, mismatches, select_seconds, total_seconds)};
}

Outcome worked_example() {
    EpeMatrix   epe(3, 2);
    const double vals[3][2] = {{1.0, 5.0}, {4.0, 1.0}, {3.0, 3.0}};
    for (std::size_t f = 0; f < 3; ++f) {
        for (std::size_t p = 0; p < 2; ++p) {
            epe(f, p) = vals[f][p];
        }
    }
    const std::vector<FrameId> frames{1, 2, 3};
    bool                       ok = true;
    std::string                detail;
    for (auto strategy : {SelectionStrategy::exhaustive, SelectionStrategy::leave_one_out}) {
        const auto sel = select_optimal(epe, frames, 2, {}, {}, strategy);
        ok = ok && sel.best.frames == std::vector<FrameId>{1, 2} && sel.assignment[0] == 1 &&
             sel.assignment[1] == 2 && sel.cost.total == 2.0;
        detail = fmt("C*={f%d,f%d}, f*(p1)=f%d, f*(p2)=f%d, cost %.1f", sel.best.frames[0], sel.best.frames[1],
                     sel.assignment[0].value_or(-1), sel.assignment[1].value_or(-1), sel.cost.total);
    }
    return {ok && brute_force_combination(epe, 2) == 2.0, detail + " (exhaustive and leave-one-out agree)"};
}

RunResult run(const Scene& scene, const OracleBackend& oracle, TrackerParams params, bool masks) {
    MaskSource mask_source;
    if (masks) {
        mask_source = [&](int t) { return scene.mask_at(t); };
    }
    return run_tracker(
        params, oracle, [&](int t) { return oracle.features_at(t); }, mask_source, scene.frame_count(),
        scene.ground_truth().positions.front());
}

Outcome zero_drift() {
    SceneConfig config;
    config.width                           = 512;
    config.height                          = 512;
    config.frame_count                     = 200;
    config.point_count                     = 100;
    config.point_margin                    = 110.0;
    config.deformation.translation         = {0.2, -0.1};
    config.deformation.affine_rate         = {2e-4, 1e-4, -1e-4, 2e-4};
    config.deformation.nonrigid_amplitude  = 2.0;
    config.deformation.nonrigid_wavelength = 90.0;
    config.deformation.temporal_frequency  = 0.01;
    config.rng_seed                        = 77;
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    std::string         detail;
    bool                ok = true;
    for (auto kind : {TrackerKind::amfst, TrackerKind::mfst, TrackerKind::chain}) {
        TrackerParams params;
        params.kind        = kind;
        params.tau         = default_tau(512, 512);
        const auto result  = run(scene, oracle, params, true);
        const auto report  = evaluate_against_truth(result.frames, scene.ground_truth());
        ok                 = ok && report.mee_px <= 1e-6;
        detail += fmt("%s MEE %.2e px; ", to_string(kind).c_str(), report.mee_px);
    }
    return {ok, detail + "limit 1e-6 px"};
}

Outcome occlusion_recovery() {
    // 10 x 10 grid of points; the occluder covers the three leftmost columns (30%) and moves with the
    // tissue so the same points stay hidden for frames 10-29.
    SceneConfig config;
    config.width                   = 512;
    config.height                  = 512;
    config.frame_count             = 45;
    config.deformation.translation = {1.0, 0.0};
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            config.points.push_back({100.0 + 30.0 * i, 100.0 + 30.0 * j});
        }
    }
    OccluderConfig bar;
    bar.center      = {130.0, 235.0};
    bar.size        = {80.0, 330.0};
    bar.velocity    = {1.0, 0.0};
    bar.first_frame = 10;
    bar.last_frame  = 29;
    config.occluders.push_back(bar);
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    const auto&         gt = scene.ground_truth();

    std::vector<std::size_t> hidden;
    for (std::size_t p = 0; p < 100; ++p) {
        if (gt.occluded[10][p]) {
            hidden.push_back(p);
        }
    }
    bool truth_ok = hidden.size() == 30;
    for (int t = 0; t < scene.frame_count(); ++t) {
        std::size_t count = 0;
        for (std::size_t p = 0; p < 100; ++p) {
            count += gt.occluded[t][p] ? 1 : 0;
            if (gt.occluded[t][p] && std::find(hidden.begin(), hidden.end(), p) == hidden.end()) {
                truth_ok = false;
            }
        }
        truth_ok = truth_ok && count == ((t >= 10 && t <= 29) ? 30U : 0U);
    }

    TrackerParams params;
    params.kind      = TrackerKind::amfst;
    params.tau       = default_tau(512, 512);
    const auto amfst = run(scene, oracle, params, true);
    std::size_t agree = 0, total = 0;
    for (int t = 0; t < scene.frame_count(); ++t) {
        for (std::size_t p = 0; p < 100; ++p) {
            agree += amfst.frames[t].points[p].occluded == gt.occluded[t][p] ? 1 : 0;
            ++total;
        }
    }
    double after = 0.0;
    for (int t = 30; t < scene.frame_count(); ++t) {
        for (std::size_t p = 0; p < 100; ++p) {
            after = std::max(after, distance(amfst.frames[t].points[p].position, gt.positions[t][p]));
        }
    }
    std::vector<bool> all(100, true);
    const double      amfst_mee30 = mee(std::vector<Point2>([&] {
                                          std::vector<Point2> v;
                                          for (const auto& p : amfst.frames[30].points) v.push_back(p.position);
                                          return v;
                                      }()),
                                   gt.positions[30], all);

    params.kind      = TrackerKind::chain;
    const auto chain = run(scene, oracle, params, true);
    double     chain_err = 0.0;
    for (std::size_t p : hidden) {
        chain_err += distance(chain.frames[30].points[p].position, gt.positions[30][p]);
    }
    chain_err /= static_cast<double>(hidden.size());

    const bool ok = truth_ok && agree == total && after <= 1e-6 && chain_err > 10.0;
    return {ok, fmt("hidden points %zu/100, flag agreement %zu/%zu, A-MFST max error from frame 30 %.2e px "
                    "(MEE at 30: %.2e), chain MEE on hidden points at frame 30 %.2f px (> 10)",
                    hidden.size(), agree, total, after, amfst_mee30, chain_err)};
}

SceneConfig drift_scene(std::uint64_t seed) {
    SceneConfig config;
    config.width                           = 512;
    config.height                          = 512;
    config.frame_count                     = 128;
    config.point_count                     = 100;
    config.point_margin                    = 100.0;
    config.deformation.translation         = {0.3, 0.2};
    config.deformation.affine_rate         = {5e-4, 0.0, 0.0, -5e-4};
    config.deformation.nonrigid_amplitude  = 2.0;
    config.deformation.nonrigid_wavelength = 96.0;
    config.deformation.temporal_frequency  = 0.01;
    config.rng_seed                        = seed;
    return config;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome drift_reduction() {
    constexpr double sigma = 0.5;
    // tau from separate occlusion-free scenes: the 99th percentile of visible consecutive-frame EPE.
    std::vector<Scene> calibration_scenes;
    for (std::uint64_t s = 1000; s < 1003; ++s) {
        calibration_scenes.emplace_back(drift_scene(s));
    }
    std::vector<double> samples;
    for (const auto& scene : calibration_scenes) {
        const OracleBackend backend(scene, sigma, 9000 + scene.config().rng_seed);
        const auto          part = consecutive_epe_samples(backend, oracle_calibration_sequence(backend, scene));
        samples.insert(samples.end(), part.begin(), part.end());
    }
    const double tau = quantile(samples, 0.99);

    std::vector<double>              final_amfst, final_chain;
    std::vector<double>              curve_amfst(128, 0.0), curve_chain(128, 0.0);
    constexpr int                    kSeeds = 20;
    for (int seed = 0; seed < kSeeds; ++seed) {
        const Scene         scene(drift_scene(static_cast<std::uint64_t>(seed + 1)));
        const OracleBackend noisy(scene, sigma, static_cast<std::uint64_t>(seed + 1));
        TrackerParams       amfst;
        amfst.kind = TrackerKind::amfst;
        amfst.n_f  = 6;
        amfst.tau  = tau;
        // The chain baseline runs without an occlusion test so it measures pure accumulated drift.
        TrackerParams chain;
        chain.kind    = TrackerKind::chain;
        chain.tau     = 1e9;
        const auto ra = evaluate_against_truth(run(scene, noisy, amfst, false).frames, scene.ground_truth());
        const auto rc = evaluate_against_truth(run(scene, noisy, chain, false).frames, scene.ground_truth());
        final_amfst.push_back(ra.mee_by_duration.back().second);
        final_chain.push_back(rc.mee_by_duration.back().second);
        for (std::size_t t = 0; t < 128; ++t) {
            curve_amfst[t] += ra.mee_by_duration[t].second / kSeeds;
            curve_chain[t] += rc.mee_by_duration[t].second / kSeeds;
        }
    }
    const double ma    = median(final_amfst);
    const double mc    = median(final_chain);
    bool         below = true;
    int          first_violation = -1;
    for (std::size_t t = 16; t < 128; ++t) {
        if (!(curve_amfst[t] < curve_chain[t])) {
            below = false;
            if (first_violation < 0) first_violation = static_cast<int>(t);
        }
    }
    const double ratio = ma / mc;
    return {ratio <= 0.4 && below,
            fmt("calibrated tau %.3f px; median final MEE A-MFST %.3f px vs chain %.3f px, ratio %.3f (limit 0.40); "
                "mean curve below chain for all t >= 16: %s",
                tau, ma, mc, ratio, below ? "yes" : fmt("no, first at t=%d", first_violation).c_str())};
}

Outcome tau_monotonicity() {
    std::size_t violations = 0, grids = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        SceneConfig config = drift_scene(seed);
        config.frame_count = 12;
        OccluderConfig blob;
        blob.shape       = OccluderShape::ellipse;
        blob.center      = {256.0, 256.0};
        blob.size        = {140.0, 100.0};
        blob.first_frame = 0;
        blob.last_frame  = 11;
        config.occluders.push_back(blob);
        const Scene         scene(config);
        const OracleBackend noisy(scene, 0.8, seed);
        std::vector<FrameRecord> refs;
        for (int t = 0; t < 7; ++t) {
            FrameRecord r{t, noisy.features_at(t), scene.ground_truth().positions[t], {}};
            r.anchor_valid.assign(r.anchors.size(), true);
            refs.push_back(std::move(r));
        }
        const auto grid = build_candidate_grid(refs, noisy.features_at(11), scene.mask_at(11), noisy);
        std::vector<PointStatus> previous(grid.epe.cols(), PointStatus{false, std::nullopt, 6, {}});
        ++grids;
        std::size_t prev_eq1 = grid.epe.cols() + 1, prev_final = grid.epe.cols() + 1;
        for (int i = 0; i < 20; ++i) {
            const double tau   = 0.05 * std::pow(1.35, i);
            const auto   eq1   = occlusion_condition(grid.epe, grid.mask_occluded, tau);
            const auto   full  = decide_amfst(grid, previous, 6, tau, false).occluded;
            const auto   c_eq1 = static_cast<std::size_t>(std::count(eq1.begin(), eq1.end(), true));
            const auto   c_all = static_cast<std::size_t>(std::count(full.begin(), full.end(), true));
            violations += (c_eq1 > prev_eq1 ? 1 : 0) + (c_all > prev_final ? 1 : 0);
            prev_eq1   = c_eq1;
            prev_final = c_all;
        }
    }
    return {violations == 0, fmt("%zu grids x 20 tau values (0.05 to %.1f px), %zu increases in occluded count",
                                 grids, 0.05 * std::pow(1.35, 19), violations)};
}

double exhaustive_medoid_cost(const std::vector<Point2>& pts, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1U << pts.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) {
            continue;
        }
        double total = 0.0;
        for (const auto& p : pts) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < pts.size(); ++m) {
                if ((mask >> m) & 1U) {
                    d = std::min(d, distance(p, pts[m]));
                }
            }
            total += d;
        }
        best = std::min(best, total);
    }
    return best;
}

Outcome kmedoids_optimality() {
    std::mt19937_64                        rng(99);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    std::size_t                            failures = 0;
    double                                 worst    = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t   n = 1 + rng() % 8;
        const std::size_t   k = 1 + rng() % std::min<std::size_t>(3, n);
        std::vector<Point2> pts;
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back({u(rng), u(rng)});
        }
        const double pam  = kmedoids(pts, k).cost;
        const double best = exhaustive_medoid_cost(pts, k);
        const double rel  = std::fabs(pam - best) / std::max(1.0, best);
        worst             = std::max(worst, rel);
        failures += rel > 1e-12 ? 1 : 0;
    }
    return {failures == 0, fmt("500 instances (n <= 8, k <= 3), %zu suboptimal, worst relative gap %.2e", failures,
                               worst)};
}

Outcome metric_fidelity() {
    std::mt19937_64                        rng(5);
    std::uniform_real_distribution<double> coord(0.0, 300.0), err(0.0, 80.0), angle(0.0, 6.283185307179586);
    double                                 worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int                    frames = 2 + static_cast<int>(rng() % 6);
        const int                    points = 1 + static_cast<int>(rng() % 40);
        std::vector<FrameEvaluation> run;
        for (int t = 0; t < frames; ++t) {
            FrameEvaluation f{t, {}, {}, {}};
            for (int p = 0; p < points; ++p) {
                const Point2 g{coord(rng), coord(rng)};
                const double r = err(rng), a = angle(rng);
                f.gt.push_back(g);
                f.pred.push_back(g + Point2{r * std::cos(a), r * std::sin(a)});
                f.gt_visible.push_back(rng() % 5 != 0);
            }
            f.gt_visible[0] = true;
            f.gt_visible[static_cast<std::size_t>(points - 1)] = points > 1 ? (rng() % 2 == 0) : true;
            run.push_back(std::move(f));
        }
        if (points > 1) {
            run.back().gt_visible[1] = false;
        }
        const auto report = evaluate_run(run);

        // O(n^2) reference, written without the library's helpers.
        double      sum = 0.0, mcd_sum = 0.0;
        std::size_t n = 0, frames_used = 0, occ_n = 0, occ_hit = 0;
        std::array<std::size_t, 5> hits{};
        const double               th[5] = {4.0, 8.0, 16.0, 32.0, 64.0};
        for (const auto& f : run) {
            std::vector<std::size_t> vis;
            for (std::size_t i = 0; i < f.gt.size(); ++i) {
                if (f.gt_visible[i]) {
                    vis.push_back(i);
                } else {
                    ++occ_n;
                    occ_hit += std::hypot(f.pred[i].x - f.gt[i].x, f.pred[i].y - f.gt[i].y) < 64.0 ? 1 : 0;
                }
            }
            if (f.t == 0 || vis.empty()) {
                continue;
            }
            ++frames_used;
            std::vector<std::vector<double>> d(vis.size(), std::vector<double>(vis.size()));
            for (std::size_t a = 0; a < vis.size(); ++a) {
                for (std::size_t b = 0; b < vis.size(); ++b) {
                    d[a][b] = std::hypot(f.pred[vis[a]].x - f.gt[vis[b]].x, f.pred[vis[a]].y - f.gt[vis[b]].y);
                }
            }
            double row = 0.0, col = 0.0;
            for (std::size_t a = 0; a < vis.size(); ++a) {
                double mr = 1e300, mc = 1e300;
                for (std::size_t b = 0; b < vis.size(); ++b) {
                    mr = std::min(mr, d[a][b]);
                    mc = std::min(mc, d[b][a]);
                }
                row += mr;
                col += mc;
                sum += d[a][a];
                ++n;
                for (int k = 0; k < 5; ++k) {
                    hits[k] += d[a][a] < th[k] ? 1 : 0;
                }
            }
            mcd_sum += 0.5 * (row + col) / static_cast<double>(vis.size());
        }
        double delta = 0.0;
        for (int k = 0; k < 5; ++k) {
            delta += static_cast<double>(hits[k]) / static_cast<double>(n) / 5.0;
        }
        auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1e-300, std::fabs(b)); };
        worst    = std::max({worst, rel(report.mee_px, sum / static_cast<double>(n)),
                             rel(report.mcd_px, mcd_sum / static_cast<double>(frames_used)),
                             rel(report.delta_avg, delta)});
        if (occ_n > 0) {
            worst = std::max(worst, report.delta64_occluded
                                        ? rel(*report.delta64_occluded,
                                              static_cast<double>(occ_hit) / static_cast<double>(occ_n))
                                        : 1.0);
        }
    }
    const bool thresholds_ok = kDeltaThresholds == std::array<double, 5>{4.0, 8.0, 16.0, 32.0, 64.0};
    return {worst <= 1e-9 && thresholds_ok,
            fmt("100 random runs, worst relative deviation %.2e (limit 1e-9); thresholds [4, 8, 16, 32, 64]: %s",
                worst, thresholds_ok ? "yes" : "no")};
}

Outcome mfst_memory_bound() {
    SceneConfig config;
    config.width        = 128;
    config.height       = 128;
    config.frame_count  = 150;
    config.point_count  = 5;
    config.deformation.nonrigid_amplitude = 1.0;
    config.deformation.temporal_frequency = 0.02;
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    MfstTracker tracker(oracle, oracle.features_at(0), scene.ground_truth().positions[0], MfstConfig{});
    std::size_t violations = tracker.retained_frame_count() == 1 ? 0 : 1;
    for (int t = 1; t < scene.frame_count(); ++t) {
        tracker.step(oracle.features_at(t), nullptr);
        violations += tracker.retained_frame_count() == static_cast<std::size_t>(std::min(t, 32) + 1) ? 0 : 1;
    }
    return {violations == 0, fmt("t = 0..149, %zu frames where retained count != min(t, 32) + 1", violations)};
}

CandidateGrid random_grid(std::size_t points, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    CandidateGrid                          grid;
    grid.frame_ids     = {3, 7, 9, 12, 15, 18, 19};
    grid.epe           = EpeMatrix(7, points);
    grid.predictions   = Table<Point2>(7, points);
    grid.mask_occluded = OcclusionMatrix(7, points, 0);
    for (std::size_t f = 0; f < 7; ++f) {
        for (std::size_t p = 0; p < points; ++p) {
            grid.epe(f, p)           = u(rng);
            grid.mask_occluded(f, p) = rng() % 50 == 0 ? 1 : 0;
        }
    }
    return grid;
}

double time_decision(std::size_t points) {
    std::mt19937_64                rng(points);
    const CandidateGrid            grid = random_grid(points, rng);
    std::vector<PointStatus>       previous(points, PointStatus{false, std::nullopt, 19, {}});
    for (std::size_t p = 0; p < points; p += 97) {
        previous[p] = {true, 3, 3, {}};
    }
    const int reps = static_cast<int>(std::max<std::size_t>(20, 200000 / points));
    double    best = std::numeric_limits<double>::infinity();
    std::size_t sink = 0;
    for (int batch = 0; batch < 5; ++batch) {
        const auto start = Clock::now();
        for (int r = 0; r < reps; ++r) {
            const auto d = decide_amfst(grid, previous, 6, 2.0, false);
            sink += d.selection.best.rows.size();
        }
        best = std::min(best, seconds_since(start) / reps);
    }
    if (sink == 0) {
        std::puts("unreachable");
    }
    return best * 1e3;
}

Outcome performance() {
    const double                ms1024 = time_decision(1024);
    std::vector<double>         xs, ys;
    std::string                 series;
    for (std::size_t n = 128; n <= 8192; n *= 2) {
        const double ms = time_decision(n);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(ms));
        series += fmt("%zu:%.3f ", n, ms);
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double       sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    return {ms1024 < 5.0 && std::fabs(slope - 1.0) <= 0.15,
            fmt("n_p=1024, n_f=6: %.3f ms/frame (limit 5 ms); log-log slope %.3f (1.0 +/- 0.15); ms by n_p: %s",
                ms1024, slope, series.c_str())};
}

}  // namespace

// Usage: amfst_acceptance [--tolerate i,j,...]
// Every criterion is always run and reported. A tolerated criterion that fails is still printed as
// FAIL but does not make the process exit non-zero.
std::set<std::size_t> parse_tolerated(int argc, char** argv) {
    std::set<std::size_t> out;
    for (int a = 1; a < argc; ++a) {
        if (std::string(argv[a]) != "--tolerate" || a + 1 >= argc) {
            throw std::invalid_argument("usage: amfst_acceptance [--tolerate i,j,...]");
        }
        std::stringstream list(argv[++a]);
        std::string       item;
        while (std::getline(list, item, ',')) {
            out.insert(std::stoul(item));
        }
    }
    return out;
}

int main(int argc, char** argv) {
    std::set<std::size_t> tolerated;
    try {
        tolerated = parse_tolerated(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    struct Criterion {
        const char*              name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"selection oracle equivalence", selection_oracle_equivalence},
        {"worked selection example", worked_example},
        {"zero drift with exact flow", zero_drift},
        {"occlusion detection and recovery", occlusion_recovery},
        {"drift reduction under noise", drift_reduction},
        {"tau monotonicity", tau_monotonicity},
        {"k-medoids optimality", kmedoids_optimality},
        {"metric fidelity", metric_fidelity},
        {"MFST memory bound", mfst_memory_bound},
        {"selection performance", performance},
    };
    std::size_t failed = 0, blocking = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) {
            ++failed;
            blocking += tolerated.count(i + 1) ? 0 : 1;
        }
        std::printf("[%s] %zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    if (failed > blocking) {
        std::printf("%zu failing criteria are on the tolerated list\n", failed - blocking);
    }
    return blocking == 0 ? 0 : 1;
}
