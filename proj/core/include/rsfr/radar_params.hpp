#pragma once

namespace rsfr {

/// Stepped-frequency waveform parameters for one coherent processing
/// interval. The radar transmits n_pulses single-frequency pulses; the
/// carrier of each pulse hops over n_freqs grid points spaced freq_step
/// apart, synthesizing a bandwidth of n_freqs * freq_step.
struct RadarParams {
  int n_pulses = 0;        ///< N, pulses per CPI
  int n_freqs = 0;         ///< M, carrier frequency grid points
  double freq_step = 0.0;  ///< frequency step in Hz
  double carrier = 0.0;    ///< initial carrier frequency in Hz
  double pri = 0.0;        ///< pulse repetition interval in seconds

  /// Synthetic bandwidth in Hz, M * freq_step.
  double synthetic_bandwidth() const { return n_freqs * freq_step; }

  /// Synthetic bandwidth over carrier, M * freq_step / carrier.
  double relative_bandwidth() const { return synthetic_bandwidth() / carrier; }

  /// Throws std::invalid_argument unless N >= 1, M >= 1 and freq_step,
  /// carrier and pri are positive and finite.
  void validate() const;
};

/// Same waveform with the carrier re-derived so that relative_bandwidth()
/// equals rb, holding freq_step fixed. Used to sweep the relative
/// bandwidth without touching the frequency grid.
RadarParams with_relative_bandwidth(RadarParams params, double rb);

}  // namespace rsfr
