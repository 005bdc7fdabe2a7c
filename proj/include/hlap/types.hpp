#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hlap {

template <class T = double>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T = double>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = VectorX<double>;
using MatrixXd = MatrixX<double>;

// Raised on arguments outside an operation's stated domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace hlap
