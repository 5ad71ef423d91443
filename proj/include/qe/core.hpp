#pragma once

// Exact small-scale linear algebra for one object qubit and one probe qubit.
//
// Basis ordering is object-major: (O+M+, O+M-, O-M+, O-M-). The operator
// <O_i| rho |O_j> acting on the probe is then the contiguous 2x2 block at
// (2i, 2j) of the 4x4 density matrix.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qe {

using Amplitude = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

enum class ErrorKind {
  ZeroNorm,
  NotHermitian,
  DomainError,
  DegenerateBranch,
  NotFound,
  NotNormalized,
  InsufficientCounts,
  InvalidState,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kDerived = 1e-10;
inline constexpr double kRoot = 1e-9;
inline constexpr double kZeroNorm = 1e-14;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kEigenFloor = 1e-10;
}  // namespace tol

/// Which object branch ("path") a conditional probe quantity refers to.
enum class Branch { Plus, Minus };

/// Normalized pure state of the object-probe pair.
class PureState {
 public:
  /// Throws InvalidState unless the amplitudes are finite and have unit norm
  /// within tol::kConstruction.
  PureState(Amplitude pp, Amplitude pm, Amplitude mp, Amplitude mm);

  /// Rescales arbitrary amplitudes to unit norm. Throws ZeroNorm when the
  /// squared norm is below tol::kZeroNorm.
  static PureState normalized(const std::array<Amplitude, 4>& raw);

  const Amplitude& pp() const { return amp_[0]; }
  const Amplitude& pm() const { return amp_[1]; }
  const Amplitude& mp() const { return amp_[2]; }
  const Amplitude& mm() const { return amp_[3]; }
  const std::array<Amplitude, 4>& amplitudes() const { return amp_; }

  /// Unnormalized conditional probe state <O_branch|Psi>.
  Eigen::Vector2cd probe_branch(Branch branch) const;

  /// True when every amplitude has an exactly zero imaginary part.
  bool is_real() const;

 private:
  explicit PureState(const std::array<Amplitude, 4>& amp, bool checked);
  std::array<Amplitude, 4> amp_;
};

/// Hermitian, unit-trace, positive semidefinite 4x4 operator.
class DensityOperator {
 public:
  /// Throws InvalidState when an invariant is violated (Hermitian and trace
  /// within tol::kConstruction, eigenvalues >= -tol::kEigenFloor).
  explicit DensityOperator(const Matrix4& m);

  const Matrix4& matrix() const { return m_; }

  /// Probe operator <O_row| rho |O_col>.
  Matrix2 block(Branch row, Branch col) const;

 private:
  Matrix4 m_;
};

/// 2x2 operator acting on the object factor only (op (x) 1).
struct ObjectOperator {
  Matrix2 matrix;
};

/// 2x2 operator acting on the probe factor only (1 (x) op).
struct ProbeOperator {
  Matrix2 matrix;
};

/// Result of a non-trace-preserving filter followed by renormalization.
struct Filtered {
  PureState state;
  double success_prob;
};

/// Real rotation [[cos, sin], [-sin, cos]]; maps (|M+>, |M->) onto the basis
/// rotated by theta from the horizontal plane.
Matrix2 basis_rotation(double theta);

/// Matrix applied to probe amplitudes by rotate_probe: the inverse of
/// basis_rotation(theta). Component 0 of the result is the amplitude on
/// M+(theta), i.e. <M+(theta)| = cos(theta) <M+| - sin(theta) <M-|.
Matrix2 probe_amplitude_rotation(double theta);

DensityOperator to_density(const PureState& state);

Filtered apply_object(const ObjectOperator& op, const PureState& state);

PureState apply_probe_unitary(const ProbeOperator& op, const PureState& state);

/// Re-expresses the state in the probe basis {|M+(theta)>, |M-(theta)>}.
PureState rotate_probe(const PureState& state, double theta);

/// Tr_M rho, the reduced object operator (unit trace).
Matrix2 partial_trace_probe(const DensityOperator& rho);

/// |lambda_1| + |lambda_2| from the closed-form spectrum of a Hermitian 2x2.
/// Throws NotHermitian when |h - h^dagger| exceeds tol::kHermitian.
double trace_norm_2x2(const Matrix2& h);

}  // namespace qe
