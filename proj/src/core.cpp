#include "qe/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateBranch: return "DegenerateBranch";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InsufficientCounts: return "InsufficientCounts";
    case ErrorKind::InvalidState: return "InvalidState";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {

double squared_norm(const std::array<Amplitude, 4>& amp) {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s;
}

bool all_finite(const std::array<Amplitude, 4>& amp) {
  return std::all_of(amp.begin(), amp.end(), [](const Amplitude& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
  });
}

}  // namespace

PureState::PureState(Amplitude pp, Amplitude pm, Amplitude mp, Amplitude mm)
    : amp_{pp, pm, mp, mm} {
  if (!all_finite(amp_)) throw Error(ErrorKind::InvalidState, "non-finite amplitude");
  const double n2 = squared_norm(amp_);
  if (std::abs(n2 - 1.0) > tol::kConstruction) {
    std::ostringstream os;
    os << "squared norm " << n2 << " differs from 1";
    throw Error(ErrorKind::InvalidState, os.str());
  }
}

PureState::PureState(const std::array<Amplitude, 4>& amp, bool) : amp_(amp) {}

PureState PureState::normalized(const std::array<Amplitude, 4>& raw) {
  if (!all_finite(raw)) throw Error(ErrorKind::InvalidState, "non-finite amplitude");
  const double norm = std::sqrt(squared_norm(raw));
  if (norm < tol::kZeroNorm) throw Error(ErrorKind::ZeroNorm, "state fully absorbed");
  std::array<Amplitude, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = raw[i] / norm;
  return PureState(out[0], out[1], out[2], out[3]);
}

Eigen::Vector2cd PureState::probe_branch(Branch branch) const {
  const std::size_t o = branch == Branch::Plus ? 0 : 2;
  return Eigen::Vector2cd(amp_[o], amp_[o + 1]);
}

bool PureState::is_real() const {
  return std::all_of(amp_.begin(), amp_.end(), [](const Amplitude& a) { return a.imag() == 0.0; });
}

DensityOperator::DensityOperator(const Matrix4& m) : m_(m) {
  if (!m_.allFinite()) throw Error(ErrorKind::InvalidState, "non-finite density matrix entry");
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kConstruction) throw Error(ErrorKind::InvalidState, "density matrix not Hermitian");
  const Amplitude tr = m_.trace();
  if (std::abs(tr - 1.0) > tol::kConstruction) throw Error(ErrorKind::InvalidState, "trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix4> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kEigenFloor)
    throw Error(ErrorKind::InvalidState, "density matrix has a negative eigenvalue");
}

Matrix2 DensityOperator::block(Branch row, Branch col) const {
  const Eigen::Index r = row == Branch::Plus ? 0 : 2;
  const Eigen::Index c = col == Branch::Plus ? 0 : 2;
  return m_.block<2, 2>(r, c);
}

Matrix2 basis_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix2 r;
  r << c, s, -s, c;
  return r;
}

Matrix2 probe_amplitude_rotation(double theta) { return basis_rotation(-theta); }

DensityOperator to_density(const PureState& state) {
  const auto& a = state.amplitudes();
  Eigen::Vector4cd v(a[0], a[1], a[2], a[3]);
  return DensityOperator(v * v.adjoint());
}

Filtered apply_object(const ObjectOperator& op, const PureState& state) {
  const auto& a = state.amplitudes();
  const Matrix2& m = op.matrix;
  std::array<Amplitude, 4> out;
  // Probe index k is the fast axis, so each probe column transforms independently.
  for (int k = 0; k < 2; ++k) {
    out[k] = m(0, 0) * a[k] + m(0, 1) * a[2 + k];
    out[2 + k] = m(1, 0) * a[k] + m(1, 1) * a[2 + k];
  }
  double n2 = squared_norm(out);
  if (std::sqrt(n2) < tol::kZeroNorm) throw Error(ErrorKind::ZeroNorm, "state fully absorbed");
  PureState s = PureState::normalized(out);
  return {s, std::min(1.0, n2)};
}

PureState apply_probe_unitary(const ProbeOperator& op, const PureState& state) {
  const auto& a = state.amplitudes();
  const Matrix2& m = op.matrix;
  std::array<Amplitude, 4> out;
  for (int o = 0; o < 2; ++o) {
    out[2 * o] = m(0, 0) * a[2 * o] + m(0, 1) * a[2 * o + 1];
    out[2 * o + 1] = m(1, 0) * a[2 * o] + m(1, 1) * a[2 * o + 1];
  }
  return PureState::normalized(out);
}

PureState rotate_probe(const PureState& state, double theta) {
  return apply_probe_unitary(ProbeOperator{probe_amplitude_rotation(theta)}, state);
}

Matrix2 partial_trace_probe(const DensityOperator& rho) {
  const Matrix4& m = rho.matrix();
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return out;
}

double trace_norm_2x2(const Matrix2& h) {
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kHermitian) throw Error(ErrorKind::NotHermitian, "operator is not Hermitian");
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Amplitude b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  // |l1| + |l2| = max(|l1 + l2|, |l1 - l2|).
  const double spread = 2.0 * std::hypot(0.5 * (a - d), std::abs(b));
  return std::max(std::abs(a + d), spread);
}

}  // namespace qe
