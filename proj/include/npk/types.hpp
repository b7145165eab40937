#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace npk {

using Real = double;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<Real, 3, 2>;

/// Thrown when a numerical stage fails (non-SPD metric, infinite energy
/// sample, non-convergent solve). The message names the stage/location.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr Real pi = 3.14159265358979323846;

}  // namespace npk
