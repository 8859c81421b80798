#pragma once

#include <Eigen/Core>

namespace uqsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace uqsim
