#pragma once

#include <complex>
#include <functional>
#include <span>

namespace lorentz::spectral {

/// Multiplier indexed by the non-negative wavenumber k = 0..N/2 of a real signal.
using Multiplier = std::function<std::complex<double>(int k)>;

/// out = IDFT(m(k) * DFT(in)) for a real periodic signal on N uniform nodes.
/// `in` and `out` may alias. Safe to call from several threads.
void apply_multiplier(std::span<const double> in, std::span<double> out, const Multiplier& m);

/// Spectral derivative on [0, period); the Nyquist mode is dropped so the
/// operator is real and skew-symmetric.
void derivative(std::span<const double> in, std::span<double> out, double period);

/// Zero-mean primitive: derivative(primitive(f)) = f - mean(f) - Nyquist part of f.
void primitive(std::span<const double> in, std::span<double> out, double period);

}  // namespace lorentz::spectral
