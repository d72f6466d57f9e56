#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dae {

using Md = Eigen::MatrixXd;
using Vd = Eigen::VectorXd;

// Invalid inputs, bad configuration, dimension mismatches. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failures: divergence, NaN guards, violated analytic assumptions,
// degenerate data. CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace dae
