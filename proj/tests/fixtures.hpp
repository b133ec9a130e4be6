#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include "svarladder/model.hpp"

namespace fixtures {

// The converged, thresholded factor tables of the worked 4-bearing example
// (the day before the bearing-1 failure). Row = effect, column = cause.
inline svl::CausalFactors feb18_factors() {
    svl::CausalFactors f;
    f.channel_names = {"B1", "B2", "B3", "B4"};
    f.structural.resize(4, 4);
    f.structural << 0, 0.1408, 0, 0.2626,
                    0, 0, -0.1251, -0.23,
                    0, -0.1855, 0, 0.226,
                    0, 0, 0, 0;
    Eigen::MatrixXd lag1(4, 4);
    lag1 << 0.3926, 0, 0.1719, -0.5922,
            0.1274, 0.5031, -0.1042, 0,
            0, 0, 0.5469, 0,
            0, 0, 0, 0.6423;
    f.lagged = {lag1};
    return f;
}

// A healthy-baseline style table: self-node factors plus one weak cross link,
// nothing structural, no multi-edge loops.
inline svl::CausalFactors baseline_factors() {
    svl::CausalFactors f;
    f.channel_names = {"B1", "B2", "B3", "B4"};
    f.structural = Eigen::MatrixXd::Zero(4, 4);
    Eigen::MatrixXd lag1 = Eigen::MatrixXd::Zero(4, 4);
    lag1.diagonal() << 0.35, 0.42, 0.4, 0.5;
    lag1(2, 0) = 0.12;  // B1 -> B3, one lag
    f.lagged = {lag1};
    return f;
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("svarladder_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool approx_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace fixtures
