// Tracks points through a synthetic scene with a moving occluder and prints, per frame, how many points
// each tracker flags occluded and its mean endpoint error on visible points.
//
//   occlusion_demo [scene.json]

#include "amfst/amfst.hpp"

#include <cstdio>
#include <iostream>

namespace {

amfst::SceneConfig default_scene() {
    amfst::SceneConfig config;
    config.width                   = 256;
    config.height                  = 256;
    config.frame_count             = 40;
    config.point_count             = 60;
    config.deformation.translation = {1.0, 0.0};
    amfst::OccluderConfig bar;
    bar.center      = {90.0, 128.0};
    bar.size        = {60.0, 256.0};
    bar.velocity    = {1.0, 0.0};
    bar.first_frame = 10;
    bar.last_frame  = 29;
    config.occluders.push_back(bar);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const amfst::SceneConfig config =
            argc > 1 ? amfst::read_json_file(argv[1]).get<amfst::SceneConfig>() : default_scene();
        const amfst::Scene         scene(config);
        const amfst::OracleBackend oracle(scene);
        const auto&                truth = scene.ground_truth();

        std::vector<amfst::RunResult> runs;
        for (auto kind : {amfst::TrackerKind::chain, amfst::TrackerKind::amfst}) {
            amfst::TrackerParams params;
            params.kind = kind;
            params.tau  = amfst::default_tau(scene.width(), scene.height());
            runs.push_back(amfst::run_tracker(
                params, oracle, [&](int t) { return oracle.features_at(t); },
                [&](int t) { return scene.mask_at(t); }, scene.frame_count(), truth.positions.front()));
        }

        std::printf("%5s %12s %12s %12s %12s\n", "t", "chain occ", "chain MEE", "amfst occ", "amfst MEE");
        for (int t = 0; t < scene.frame_count(); ++t) {
            std::printf("%5d", t);
            for (const auto& run : runs) {
                int    occluded = 0;
                double err      = 0.0;
                int    visible  = 0;
                for (std::size_t p = 0; p < run.frames[t].points.size(); ++p) {
                    occluded += run.frames[t].points[p].occluded ? 1 : 0;
                    if (!truth.occluded[t][p]) {
                        err += amfst::distance(run.frames[t].points[p].position, truth.positions[t][p]);
                        ++visible;
                    }
                }
                std::printf(" %12d %12.4f", occluded, visible > 0 ? err / visible : 0.0);
            }
            std::printf("\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
