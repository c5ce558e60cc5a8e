#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace resonwave {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

enum class WaveKind { Cosine, Sine };

inline int kappa_of(WaveKind k) { return k == WaveKind::Cosine ? 1 : 0; }
const char* to_string(WaveKind k);

}  // namespace resonwave
