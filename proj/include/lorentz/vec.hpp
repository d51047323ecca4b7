#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace lorentz {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline std::array<double, 3> to_array(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

inline Vec3 curl_from_jacobian(const Mat3& jac) {
  // jac(j, c) = d A_j / d x_c
  return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

inline double operator_norm(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  return svd.singularValues()(0);
}

/// Quasi-uniform points on the sphere of the given radius (Fibonacci lattice).
std::vector<Vec3> fibonacci_sphere(int count, double radius, const Vec3& center = Vec3::Zero());

}  // namespace lorentz
