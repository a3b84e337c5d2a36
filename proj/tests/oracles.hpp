#pragma once

// Reference values computed once with an independent high-precision tool and
// frozen here.
namespace oracle {

// argmax and max of exp(-(z-1)^2) + 0.5 exp(-(z+3)^2)
inline constexpr double kBimodalArgmax = 0.999999774929258;
inline constexpr double kBimodalMax = 1.00000005626764;

// sup_zeta int N(t; 0, 1) / (1 + beta (zeta - t)^2) dt, attained at zeta = 0
inline constexpr double kSfGaussianBeta001 = 0.990285964717319;
inline constexpr double kSfGaussianBeta01 = 0.920785144453894;
inline constexpr double kSfGaussianBeta1 = 0.655679542418799;

}  // namespace oracle
