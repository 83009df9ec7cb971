#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hgks {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Cell-averaged gradient of the conservative variables: column j holds dQ/dx_j.
using Grad5 = Eigen::Matrix<double, 5, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// Thermodynamically invalid state. `cell` is -1 when not attributable to a cell.
class StateError : public Error {
 public:
  StateError(const std::string& what, int cell = -1) : Error(what), cell_(cell) {}
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgks
