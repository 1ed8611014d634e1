#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fx/errors.hpp"

namespace fx {

using Sample = double;

// Hard ceiling on any delay or filter lag, in samples.
inline constexpr std::size_t kMaxLag = std::size_t{1} << 21;

// Fixed-length multichannel frame buffer; the unit of streaming.
// All channels hold the same number of frames.
struct AudioBlock {
    std::uint32_t sample_rate_hz = 44100;
    std::vector<std::vector<Sample>> samples;  // [channel][frame]

    AudioBlock() = default;
    AudioBlock(std::size_t channels, std::size_t frames, std::uint32_t rate);

    std::size_t channels() const { return samples.size(); }
    std::size_t frames() const { return samples.empty() ? 0 : samples[0].size(); }

    bool operator==(const AudioBlock&) const = default;
};

struct SparseTap {
    std::size_t lag = 0;
    double coeff = 0.0;

    bool operator==(const SparseTap&) const = default;
};

// Rational transfer function in z^-1 with sparse integer lags.
// Numerator taps feed forward; denominator taps with lag > 0 feed back.
// The denominator always starts with the (0, 1) entry.
struct SparseRationalTF {
    std::vector<SparseTap> numerator;
    std::vector<SparseTap> denominator{{0, 1.0}};
    std::string name;

    std::size_t max_numerator_lag() const;
    std::size_t max_denominator_lag() const;
    bool is_fir() const { return denominator.size() == 1; }

    bool operator==(const SparseRationalTF&) const = default;
};

// Validates lag ordering, the unit lag-0 denominator entry, coefficient
// finiteness and the kMaxLag capacity. Throws ConfigError.
SparseRationalTF make_tf(std::vector<SparseTap> numerator,
                         std::vector<SparseTap> denominator,
                         std::string name = {});

// Zero-initialized ring holding the last `depth` pushed values.
class HistoryRing {
public:
    HistoryRing() = default;
    explicit HistoryRing(std::size_t depth);

    // Value pushed `age` pushes ago; age in [1, depth]. Zero before first push.
    double at(std::size_t age) const { return buf_[(pos_ - age) & mask_]; }
    void push(double v) {
        buf_[pos_ & mask_] = v;
        ++pos_;
    }
    void clear();

private:
    std::vector<double> buf_{0.0};
    std::size_t mask_ = 0;
    std::size_t pos_ = 0;
};

// Fixed delay of D samples; emits zeros for the first D ticks.
class DelayLine {
public:
    explicit DelayLine(std::size_t delay);

    Sample tick(Sample x);
    std::size_t delay() const { return delay_; }

private:
    std::size_t delay_;
    HistoryRing ring_;
};

// Per-channel input/output history for one SparseRationalTF.
// Single-owner mutable; transferable between threads, not shareable.
class FilterState {
public:
    FilterState() = default;
    FilterState(const SparseRationalTF& tf, std::size_t channels);

    std::size_t channels() const { return in_.size(); }
    void reset();

    HistoryRing& input(std::size_t ch) { return in_[ch]; }
    HistoryRing& output(std::size_t ch) { return out_[ch]; }

private:
    std::vector<HistoryRing> in_;
    std::vector<HistoryRing> out_;
};

enum class Stability { Fir, Stable, Marginal, Unstable };

// Poles are reported in the reduced plane w = z^gcd, where gcd is taken
// over the denominator lags > 0; |w| < 1 there is exactly z-plane stability.
struct StabilityReport {
    std::size_t reduced_lag_gcd = 0;  // 0 for FIR
    std::vector<std::complex<double>> poles;
    std::vector<double> pole_magnitudes;
    Stability classification = Stability::Fir;
    bool converged = true;  // false: eigenvalue iteration failed, results partial
};

// Stable/marginal/unstable tolerance around |pole| = 1.
inline constexpr double kStabilityEpsilon = 1e-9;

const char* to_string(Stability s);

// Direct-form evaluation y[n] = sum_k b_k x[n-lag_k] - sum_m a_m y[n-lag_m],
// feedback read before write within a tick; history carries across blocks.
// Throws ConfigError on channel mismatch, NumericError (with the offending
// channel/frame) if an output sample goes non-finite.
AudioBlock tf_process_block(const SparseRationalTF& tf, FilterState& state,
                            const AudioBlock& block);

// Response to [1, 0, 0, ...] of the given length (mono, default rate).
std::vector<Sample> impulse_response(const SparseRationalTF& tf, std::size_t length);

StabilityReport analyze_stability(const SparseRationalTF& tf);

}  // namespace fx
