#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace pmfht {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

/// A finite set of 3D sample points assumed to lie on (or near) a smooth
/// 2-manifold embedded in R^3. Rows are points.
struct PointCloud {
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts;

  int size() const { return static_cast<int>(pts.rows()); }
  Eigen::Vector3d point(int i) const { return pts.row(i).transpose(); }
};

/// Whether a failure indicates bad input (validation) or a numeric breakdown
/// inside an otherwise well-formed computation. The CLI maps these to
/// distinct exit codes.
enum class ErrorKind { validation, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define PMFHT_DEFINE_ERROR(NAME, KIND)                                  \
  class NAME : public Error {                                           \
   public:                                                              \
    explicit NAME(const std::string& what) : Error(ErrorKind::KIND, #NAME ": " + what) {} \
  }

PMFHT_DEFINE_ERROR(DimensionMismatch, validation);
PMFHT_DEFINE_ERROR(IndexOutOfRange, validation);
PMFHT_DEFINE_ERROR(InvalidArgument, validation);
PMFHT_DEFINE_ERROR(ParseError, validation);
PMFHT_DEFINE_ERROR(UnsupportedFormat, validation);
PMFHT_DEFINE_ERROR(IoError, validation);
PMFHT_DEFINE_ERROR(ConfigError, validation);
PMFHT_DEFINE_ERROR(EmptyCube, validation);

PMFHT_DEFINE_ERROR(DegenerateNeighborhood, numeric);
PMFHT_DEFINE_ERROR(NonPositiveArea, numeric);
PMFHT_DEFINE_ERROR(EigensolveFailure, numeric);
PMFHT_DEFINE_ERROR(NotOrthogonal, numeric);
PMFHT_DEFINE_ERROR(RankDeficient, numeric);
PMFHT_DEFINE_ERROR(ChaosDiverged, numeric);
PMFHT_DEFINE_ERROR(SingularSystem, numeric);

#undef PMFHT_DEFINE_ERROR

/// Throws InvalidArgument unless the cloud has >= 4 finite points.
void validate_cloud(const PointCloud& cloud);

}  // namespace pmfht
