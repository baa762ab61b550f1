#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace gazewalk {

// Scalar type used throughout the toolkit.
using Scalar = double;

using Vec2 = Eigen::Vector2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Error with a stable machine-readable kind tag ("short_path",
// "no_walking_phase", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

}  // namespace gazewalk
