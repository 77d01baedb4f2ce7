// Copyright 2026 The coopbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace coopbeam {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

template <class Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <class Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

// Error hierarchy. Every failure the library reports derives from Error so
// the harness can record a code per trial and keep going.
class Error : public std::runtime_error {
 public:
  enum class Code { kConfig = 1, kPrecondition = 2, kShape = 3, kDomain = 4, kNumerical = 5, kSizeGuard = 6 };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(Code::kConfig, what) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error(Code::kPrecondition, what) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(Code::kShape, what) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(Code::kDomain, what) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(Code::kNumerical, what) {}
};
struct SizeGuardError : Error {
  explicit SizeGuardError(const std::string& what) : Error(Code::kSizeGuard, what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace coopbeam
