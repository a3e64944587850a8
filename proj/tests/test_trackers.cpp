#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace amfst;
using amfst::testing::moving_scene;

namespace {

RunResult run_on(const Scene& scene, const FlowBackend& backend, const OracleBackend& oracle, TrackerParams params,
                 bool with_masks = true) {
    MaskSource masks;
    if (with_masks) {
        masks = [&](int t) { return scene.mask_at(t); };
    }
    return run_tracker(
        params, backend, [&](int t) { return oracle.features_at(t); }, masks, scene.frame_count(),
        scene.ground_truth().positions.front());
}

double max_error(const RunResult& run, const GroundTruth& gt) {
    double worst = 0.0;
    for (std::size_t t = 0; t < run.frames.size(); ++t) {
        for (std::size_t p = 0; p < run.frames[t].points.size(); ++p) {
            worst = std::max(worst, distance(run.frames[t].points[p].position, gt.positions[t][p]));
        }
    }
    return worst;
}

}  // namespace

class AllTrackers : public ::testing::TestWithParam<TrackerKind> {};

TEST_P(AllTrackers, ExactOracleHasNoDriftAndNoOcclusion) {
    const Scene         scene(moving_scene(40, 30));
    const OracleBackend oracle(scene);
    TrackerParams       params;
    params.kind    = GetParam();
    const auto run = run_on(scene, oracle, oracle, params);
    EXPECT_LT(max_error(run, scene.ground_truth()), 1e-6);
    for (const auto& frame : run.frames) {
        for (const auto& p : frame.points) {
            EXPECT_FALSE(p.occluded);
            EXPECT_TRUE(p.source_frame.has_value());
        }
    }
}

TEST_P(AllTrackers, FullMaskOccludesEveryPoint) {
    SceneConfig    config = moving_scene(10, 12);
    OccluderConfig cover;
    cover.center      = {64.0, 64.0};
    cover.size        = {200.0, 200.0};
    cover.first_frame = 5;
    cover.last_frame  = 5;
    config.occluders.push_back(cover);
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    TrackerParams       params;
    params.kind    = GetParam();
    const auto run = run_on(scene, oracle, oracle, params);
    for (const auto& p : run.frames[5].points) {
        EXPECT_TRUE(p.occluded);
        EXPECT_FALSE(p.source_frame.has_value());
    }
    for (const auto& p : run.frames[4].points) {
        EXPECT_FALSE(p.occluded);
    }
    if (GetParam() != TrackerKind::chain) {
        // Frames before the occlusion remain available, so tracking resumes exactly.
        for (std::size_t p = 0; p < 12; ++p) {
            EXPECT_FALSE(run.frames[6].points[p].occluded);
            EXPECT_LT(distance(run.frames[9].points[p].position, scene.ground_truth().positions[9][p]), 1e-6);
        }
    }
}

TEST_P(AllTrackers, OccludedPointKeepsLastPosition) {
    SceneConfig    config = moving_scene(8, 6);
    OccluderConfig cover;
    cover.center      = {64.0, 64.0};
    cover.size        = {200.0, 200.0};
    cover.first_frame = 3;
    cover.last_frame  = 4;
    config.occluders.push_back(cover);
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    TrackerParams       params;
    params.kind    = GetParam();
    const auto run = run_on(scene, oracle, oracle, params);
    for (std::size_t p = 0; p < 6; ++p) {
        EXPECT_EQ(run.frames[3].points[p].position, run.frames[2].points[p].position);
        EXPECT_EQ(run.frames[4].points[p].position, run.frames[2].points[p].position);
    }
}

TEST_P(AllTrackers, RejectsOutOfOrderFrames) {
    const Scene         scene(moving_scene(5, 3));
    const OracleBackend oracle(scene);
    TrackerParams       params;
    params.kind  = GetParam();
    auto tracker = make_tracker(params, oracle, oracle.features_at(0), scene.ground_truth().positions[0]);
    EXPECT_THROW(tracker->step(oracle.features_at(2), nullptr), ContractViolation);
}

TEST_P(AllTrackers, RejectsOutOfBoundsQueries) {
    const Scene         scene(moving_scene(5, 3));
    const OracleBackend oracle(scene);
    TrackerParams       params;
    params.kind = GetParam();
    const std::vector<Point2> q{{10.0, 10.0}, {-1.0, 5.0}, {5.0, 500.0}};
    try {
        (void)make_tracker(params, oracle, oracle.features_at(0), q);
        FAIL() << "expected rejection";
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("1, 2"), std::string::npos) << e.what();
    }
}

INSTANTIATE_TEST_SUITE_P(Trackers, AllTrackers,
                         ::testing::Values(TrackerKind::chain, TrackerKind::mfst, TrackerKind::amfst),
                         [](const auto& info) { return to_string(info.param); });

TEST(Mfst, CandidateFrames) {
    const MfstConfig config;
    EXPECT_EQ(MfstTracker::candidate_frames(1, config), (std::vector<FrameId>{0}));
    EXPECT_EQ(MfstTracker::candidate_frames(5, config), (std::vector<FrameId>{0, 1, 3, 4}));
    EXPECT_EQ(MfstTracker::candidate_frames(40, config), (std::vector<FrameId>{0, 8, 24, 32, 36, 38, 39}));
    EXPECT_EQ(MfstTracker::candidate_frames(40, MfstConfig::chain(1.0)), (std::vector<FrameId>{39}));
}

TEST(Mfst, RetentionBound) {
    const Scene         scene(moving_scene(80, 4));
    const OracleBackend oracle(scene);
    MfstTracker         tracker(oracle, oracle.features_at(0), scene.ground_truth().positions[0], MfstConfig{});
    EXPECT_EQ(tracker.retained_frame_count(), 1U);
    for (int t = 1; t < 80; ++t) {
        tracker.step(oracle.features_at(t), nullptr);
        EXPECT_EQ(tracker.retained_frame_count(), static_cast<std::size_t>(std::min(t, 32) + 1)) << "t=" << t;
    }
    MfstTracker chain(oracle, oracle.features_at(0), scene.ground_truth().positions[0], MfstConfig::chain(1.0));
    for (int t = 1; t < 10; ++t) {
        chain.step(oracle.features_at(t), nullptr);
        EXPECT_EQ(chain.retained_frame_count(), 1U);
    }
    EXPECT_EQ(chain.kind(), "chain");
}

TEST(Mfst, ConfigValidation) {
    EXPECT_THROW((MfstConfig{{}, true, 1.0}.validate()), InvalidInput);
    EXPECT_THROW((MfstConfig{{2, 1}, true, 1.0}.validate()), InvalidInput);
    EXPECT_THROW((MfstConfig{{1}, true, 0.0}.validate()), InvalidInput);
    EXPECT_NO_THROW((MfstConfig{{1, 3}, false, 1.0}.validate()));
}

TEST(Amfst, ConfigValidation) {
    EXPECT_THROW((AmfstConfig{0, 0, 1.0}.validate()), InvalidInput);
    EXPECT_THROW((AmfstConfig{4, 6, 1.0}.validate()), InvalidInput);
    EXPECT_THROW((AmfstConfig{4, 0, -1.0}.validate()), InvalidInput);
    EXPECT_NO_THROW((AmfstConfig{4, 5, 1.0}.validate()));
    EXPECT_EQ((AmfstConfig{4, 0, 1.0}.n()), 4U);
}

TEST(Amfst, ReliableSetSizeStaysBounded) {
    const Scene         scene(moving_scene(30, 10));
    const OracleBackend oracle(scene, 0.4, 3);
    AmfstTracker tracker(oracle, oracle.features_at(0), scene.ground_truth().positions[0], AmfstConfig{4, 0, 5.0});
    for (int t = 1; t < 30; ++t) {
        tracker.step(oracle.features_at(t), nullptr);
        const auto ids = tracker.reliable_frame_ids();
        if (t <= 4) {
            EXPECT_EQ(ids.size(), static_cast<std::size_t>(t)) << "warm-up keeps every frame, t=" << t;
        } else {
            EXPECT_EQ(ids.size(), 4U) << "t=" << t;
        }
        EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
        EXPECT_LT(ids.back(), t);
        EXPECT_EQ(tracker.retained_frame_count(), ids.size() + 1);
    }
}

TEST(Amfst, PinnedFrameStaysInTheReliableSet) {
    SceneConfig config = moving_scene(30, 0);
    config.points      = {{30.0, 64.0}, {100.0, 64.0}};
    OccluderConfig box;
    box.center      = {30.0, 64.0};
    box.size        = {16.0, 16.0};
    box.first_frame = 5;
    box.last_frame  = 25;
    config.occluders.push_back(box);
    config.deformation = {};
    const Scene         scene(config);
    const OracleBackend oracle(scene);
    AmfstTracker tracker(oracle, oracle.features_at(0), scene.ground_truth().positions[0], AmfstConfig{2, 0, 1.0});
    for (int t = 1; t < 30; ++t) {
        tracker.step(oracle.features_at(t), scene.mask_at(t));
        const auto& status = tracker.statuses()[0];
        if (t >= 5 && t <= 25) {
            ASSERT_TRUE(status.occluded) << "t=" << t;
            const auto ids = tracker.reliable_frame_ids();
            EXPECT_NE(std::find(ids.begin(), ids.end(), *status.pinned_frame), ids.end()) << "t=" << t;
        } else {
            EXPECT_FALSE(status.occluded) << "t=" << t;
        }
        EXPECT_FALSE(tracker.statuses()[1].occluded);
    }
    EXPECT_EQ(tracker.statuses()[0].pinned_frame, std::nullopt);
    EXPECT_LT(distance(tracker.last_output().points[0].position, scene.ground_truth().positions[29][0]), 1e-9);
}

TEST(Amfst, DecisionOnHandBuiltGrid) {
    CandidateGrid grid;
    grid.frame_ids     = {1, 2, 3};
    grid.epe           = EpeMatrix(3, 3, 0.0);
    grid.predictions   = Table<Point2>(3, 3);
    grid.mask_occluded = OcclusionMatrix(3, 3, 0);
    const double vals[3][3] = {{1.0, 5.0, 9.0}, {4.0, 1.0, 9.0}, {3.0, 3.0, 9.0}};
    for (std::size_t f = 0; f < 3; ++f) {
        for (std::size_t p = 0; p < 3; ++p) {
            grid.epe(f, p) = vals[f][p];
        }
    }
    std::vector<PointStatus> prev(3, PointStatus{false, std::nullopt, 3, {}});
    const auto               d = decide_amfst(grid, prev, 2, 6.0, false);
    EXPECT_EQ(d.occluded, (std::vector<bool>{false, false, true}));
    EXPECT_EQ(d.pinned[2], 3);
    // Frame 3 is pinned by the occluded point, which leaves one free slot.
    EXPECT_EQ(d.selection.best.frames, (std::vector<FrameId>{1, 3}));
    EXPECT_EQ(d.selection.assignment[0], 1);
    EXPECT_EQ(d.selection.assignment[1], 3);
}

TEST(Amfst, BeatsChainUnderNoise) {
    SceneConfig         config = moving_scene(64, 40, 2);
    const Scene         scene(config);
    const OracleBackend noisy(scene, 0.5, 11);
    TrackerParams       chain;
    chain.kind = TrackerKind::chain;
    chain.tau  = 100.0;
    TrackerParams amfst;
    amfst.kind      = TrackerKind::amfst;
    amfst.tau       = 100.0;
    const auto rc   = run_on(scene, noisy, noisy, chain);
    const auto ra   = run_on(scene, noisy, noisy, amfst);
    const auto err  = [&](const RunResult& r) {
        return evaluate_against_truth(r.frames, scene.ground_truth()).mee_by_duration.back().second;
    };
    EXPECT_LT(err(ra), err(rc));
}
