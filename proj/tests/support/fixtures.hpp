#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>

#include "sketchmo/bvh.hpp"
#include "sketchmo/dataset.hpp"
#include "sketchmo/synthetic.hpp"

#ifndef SKETCHMO_TEST_DATA
#define SKETCHMO_TEST_DATA "tests/data"
#endif

namespace fixtures {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(SKETCHMO_TEST_DATA); }

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("sketchmo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

// Synthetic 55-clip corpus, written once per test process.
inline const fs::path& corpus_dir() {
    static TempDir dir;
    static const bool written = [] {
        sketchmo::synthetic::write_corpus(dir.path(), 55);
        return true;
    }();
    (void)written;
    return dir.path();
}

inline const sketchmo::DatasetIndex& corpus_index() {
    static const sketchmo::DatasetIndex index =
        sketchmo::build_index(corpus_dir(), sketchmo::load_config(corpus_dir() / "roles.json")).index;
    return index;
}

inline constexpr const char* kTwoJointZero = R"(HIERARCHY
ROOT Hips
{
	OFFSET 0.0 0.0 0.0
	CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
	JOINT Chest
	{
		OFFSET 0.0 1.0 0.0
		CHANNELS 3 Zrotation Xrotation Yrotation
		End Site
		{
			OFFSET 0.0 1.0 0.0
		}
	}
}
MOTION
Frames: 1
Frame Time: 0.0083333
0 0 0 0 0 0 0 0 0
)";

// Random motion on `sk` with channel values in [-lo, hi].
inline sketchmo::Motion random_motion(const sketchmo::Skeleton& sk, std::size_t frames, std::uint64_t seed,
                                      double range = 180.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-range, range);
    sketchmo::FrameMatrix f(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(sk.channel_count()));
    for (Eigen::Index r = 0; r < f.rows(); ++r)
        for (Eigen::Index c = 0; c < f.cols(); ++c) f(r, c) = u(rng);
    return sketchmo::Motion(sk, 1.0 / 120.0, std::move(f), "random_" + std::to_string(seed));
}

}  // namespace fixtures
