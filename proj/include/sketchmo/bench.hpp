#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <vector>

#include "sketchmo/retrieval.hpp"

namespace sketchmo {

struct BenchResult {
    std::size_t queries = 0;
    std::size_t entries = 0;
    double mean_s = 0.0;
    double median_s = 0.0;
    double p95_s = 0.0;
    double max_s = 0.0;
};

// Times full global queries. Each stroke is an entry's projected root path
// under the default camera with a few pixels of deterministic jitter, so the
// workload resembles real sketches.
inline BenchResult run_benchmark(const DatasetIndex& index, std::size_t queries, std::uint64_t seed = 7) {
    if (index.entries.empty()) throw QueryError("dataset index is empty");
    const Camera cam = default_global_camera(rest_height(index.entries.front().motion.skeleton()));
    const ProjectionMap map = projection_matrix(cam);
    RetrievalConfig cfg;
    std::mt19937_64 rng(seed);
    auto jitter = [&] { return (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 6.0; };

    std::vector<double> times;
    times.reserve(queries);
    for (std::size_t q = 0; q < queries; ++q) {
        const DatasetEntry& e = index.entries[q % index.entries.size()];
        std::vector<Vec2> raw;
        try {
            raw = project_trajectory(map, cam, e.trajectory(Role::root)).valid_points();
        } catch (const ProjectionError&) {
            raw = {Vec2(100, 100), Vec2(400, 300)};
        }
        for (Vec2& p : raw) p += Vec2(jitter(), jitter());

        const auto start = std::chrono::steady_clock::now();
        const Stroke2D stroke = resample_stroke(raw, cfg.samples);
        const auto result = query(stroke, cam, index, cfg);
        const auto stop = std::chrono::steady_clock::now();
        if (result.empty()) throw QueryError("benchmark query returned no candidates");
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }

    BenchResult r;
    r.queries = queries;
    r.entries = index.entries.size();
    if (times.empty()) return r;
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double t : times) sum += t;
    r.mean_s = sum / static_cast<double>(times.size());
    const std::size_t n = sorted.size();
    r.median_s = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    r.p95_s = sorted[std::min(n - 1, static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n))) - 1)];
    r.max_s = sorted.back();
    return r;
}

}  // namespace sketchmo
