#ifndef PVC_TYPES_HPP
#define PVC_TYPES_HPP

#include <Eigen/Dense>

namespace pvc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// One vertex sample of the two input fields.
struct FieldSample {
  Vec3 v;
  Vec3 w;
};

using TetFields = std::array<FieldSample, 4>;
using TriFields = std::array<FieldSample, 3>;

}  // namespace pvc

#endif
