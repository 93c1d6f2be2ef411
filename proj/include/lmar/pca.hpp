#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lmar {

/// Orthonormal basis from a 3D point cloud. Rows of `components` are the
/// principal directions, ordered by decreasing explained variance; the sign
/// convention makes each row's largest-magnitude entry positive (ties broken
/// toward the lowest axis).
struct PcaBasis {
    Eigen::Vector3d mean;
    Eigen::Matrix3d components;
    Eigen::Vector3d explained_variance;
};

PcaBasis pca_fit(const std::vector<Eigen::Vector3d>& points);

/// Scores of every point on every component; column c is the series of
/// component-c scores.
Eigen::MatrixX3d pca_project(const PcaBasis& basis,
                             const std::vector<Eigen::Vector3d>& points);

std::vector<Eigen::Vector3d> pca_reconstruct(const PcaBasis& basis,
                                             const Eigen::MatrixX3d& scores);

Eigen::Vector3d pca_reconstruct_point(const PcaBasis& basis,
                                      const Eigen::Vector3d& scores);

}  // namespace lmar
