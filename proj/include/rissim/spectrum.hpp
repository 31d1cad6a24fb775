#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/reflection.hpp"
#include "rissim/schedule.hpp"

namespace rissim {

/// Fourier-series coefficients a_k of the periodically modulated reflection
/// coefficient, one row of harmonics per control channel (super-column).
/// Elements of a panel inherit the coefficients of their group.
class HarmonicSpectrum {
  public:
    HarmonicSpectrum(double f_m_hz, int k_max, int n_channels)
        : f_m_hz_(f_m_hz),
          k_max_(k_max),
          n_channels_(n_channels),
          coeff_(static_cast<std::size_t>(2 * k_max + 1) * n_channels) {}

    double modulation_frequency_hz() const { return f_m_hz_; }
    int k_max() const { return k_max_; }
    int channel_count() const { return n_channels_; }

    cdouble at(int k, int channel) const { return coeff_[index(k, channel)]; }
    void set(int k, int channel, cdouble value) { coeff_[index(k, channel)] = value; }

  private:
    std::size_t index(int k, int channel) const {
        if (k < -k_max_ || k > k_max_) throw RangeError("harmonic index outside spectrum");
        if (channel < 0 || channel >= n_channels_) throw RangeError("channel index out of range");
        return static_cast<std::size_t>(k + k_max_) * n_channels_ + channel;
    }

    double f_m_hz_;
    int k_max_;
    int n_channels_;
    std::vector<cdouble> coeff_;
};

/// Closed-form Fourier coefficients of the piecewise-constant reflection
/// waveform Gamma(t) driven by the schedule through the given cell model
/// (evaluated at normal incidence). For k != 0,
///   a_k = sum_seg Gamma_seg * (e^{-j2πk u_end} - e^{-j2πk u_start}) / (-j2πk),
/// and a_0 is the time average.
inline HarmonicSpectrum fourier_coefficients(const ControlSchedule& schedule,
                                             const ReflectionModel& model, int k_max) {
    if (k_max < 1) throw RangeError("fourier coefficients: k_max must be >= 1");
    HarmonicSpectrum spectrum(schedule.modulation_frequency_hz(), k_max, schedule.group_count());
    const EvalContext ctx{};  // normal incidence, direction-independent for passive cells
    for (int g = 0; g < schedule.group_count(); ++g) {
        const auto& segs = schedule.segments(g);
        std::vector<cdouble> gammas(segs.size());
        for (std::size_t i = 0; i < segs.size(); ++i)
            gammas[i] = reflection_coefficient(model, segs[i].control_value, ctx);

        for (int k = -k_max; k <= k_max; ++k) {
            cdouble a{0.0, 0.0};
            if (k == 0) {
                for (std::size_t i = 0; i < segs.size(); ++i)
                    a += gammas[i] * (segs[i].end_frac - segs[i].start_frac);
            } else {
                const double w = -2.0 * std::numbers::pi * k;
                const cdouble denom{0.0, w};
                for (std::size_t i = 0; i < segs.size(); ++i) {
                    const cdouble e1 = std::polar(1.0, w * segs[i].end_frac);
                    const cdouble e0 = std::polar(1.0, w * segs[i].start_frac);
                    a += gammas[i] * (e1 - e0) / denom;
                }
            }
            spectrum.set(k, g, a);
        }
    }
    return spectrum;
}

/// Truncated reconstruction Gamma_K(u) = sum_{|k|<=K} a_k e^{j2πku}.
inline cdouble reconstruct_waveform(const HarmonicSpectrum& spectrum, int channel, double frac) {
    cdouble value{0.0, 0.0};
    for (int k = -spectrum.k_max(); k <= spectrum.k_max(); ++k)
        value += spectrum.at(k, channel) * std::polar(1.0, 2.0 * std::numbers::pi * k * frac);
    return value;
}

/// sum_{|k|<=K} |a_k|^2 for one channel.
inline double spectral_energy(const HarmonicSpectrum& spectrum, int channel) {
    double energy = 0.0;
    for (int k = -spectrum.k_max(); k <= spectrum.k_max(); ++k)
        energy += std::norm(spectrum.at(k, channel));
    return energy;
}

/// Time-averaged power of the truncated reconstruction, by uniform sampling.
/// With n_samples > 2 * k_max the discrete orthogonality of the exponentials
/// makes this equal to spectral_energy up to rounding, which is the sharp
/// consistency check on the coefficients.
inline double reconstruction_energy(const HarmonicSpectrum& spectrum, int channel,
                                    int n_samples) {
    if (n_samples <= 2 * spectrum.k_max())
        throw RangeError("reconstruction energy: n_samples must exceed 2 * k_max");
    double energy = 0.0;
    for (int m = 0; m < n_samples; ++m)
        energy += std::norm(reconstruct_waveform(spectrum, channel, (m + 0.5) / n_samples));
    return energy / n_samples;
}

/// Time-averaged |Gamma(t)|^2 of the raw piecewise-constant waveform. The
/// truncated spectral energy approaches this from below as k_max grows.
inline double waveform_energy(const ControlSchedule& schedule, const ReflectionModel& model,
                              int group) {
    const EvalContext ctx{};
    double energy = 0.0;
    for (const auto& seg : schedule.segments(group))
        energy += std::norm(reflection_coefficient(model, seg.control_value, ctx)) *
                  (seg.end_frac - seg.start_frac);
    return energy;
}

}  // namespace rissim
