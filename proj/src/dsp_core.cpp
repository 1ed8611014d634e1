#include "fx/dsp_core.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace fx {

namespace {

std::size_t ring_size_for(std::size_t depth) {
    return std::bit_ceil(std::max<std::size_t>(depth, 1));
}

void validate_taps(const std::vector<SparseTap>& taps, const char* which) {
    std::size_t prev = 0;
    bool first = true;
    for (const auto& tap : taps) {
        if (!std::isfinite(tap.coeff))
            throw ConfigError(std::string(which) + " coefficient is not finite");
        if (tap.lag > kMaxLag)
            throw ConfigError(std::string(which) + " lag " + std::to_string(tap.lag) +
                              " exceeds capacity " + std::to_string(kMaxLag));
        if (!first && tap.lag <= prev)
            throw ConfigError(std::string(which) + " lags must be strictly increasing");
        prev = tap.lag;
        first = false;
    }
}

}  // namespace

AudioBlock::AudioBlock(std::size_t channels, std::size_t frames, std::uint32_t rate)
    : sample_rate_hz(rate), samples(channels, std::vector<Sample>(frames, 0.0)) {
    if (rate == 0) throw ConfigError("sample rate must be positive");
}

std::size_t SparseRationalTF::max_numerator_lag() const {
    return numerator.empty() ? 0 : numerator.back().lag;
}

std::size_t SparseRationalTF::max_denominator_lag() const {
    return denominator.back().lag;
}

SparseRationalTF make_tf(std::vector<SparseTap> numerator,
                         std::vector<SparseTap> denominator, std::string name) {
    validate_taps(numerator, "numerator");
    validate_taps(denominator, "denominator");
    if (denominator.empty() || denominator.front().lag != 0 ||
        denominator.front().coeff != 1.0)
        throw ConfigError("denominator must start with a (lag 0, coeff 1) entry");
    SparseRationalTF tf;
    tf.numerator = std::move(numerator);
    tf.denominator = std::move(denominator);
    tf.name = std::move(name);
    return tf;
}

HistoryRing::HistoryRing(std::size_t depth)
    : buf_(ring_size_for(depth), 0.0), mask_(ring_size_for(depth) - 1) {}

void HistoryRing::clear() {
    std::fill(buf_.begin(), buf_.end(), 0.0);
    pos_ = 0;
}

DelayLine::DelayLine(std::size_t delay) : delay_(delay), ring_(delay) {
    if (delay > kMaxLag)
        throw ConfigError("delay " + std::to_string(delay) + " exceeds capacity " +
                          std::to_string(kMaxLag));
}

Sample DelayLine::tick(Sample x) {
    const Sample out = delay_ == 0 ? x : ring_.at(delay_);
    ring_.push(x);
    return out;
}

FilterState::FilterState(const SparseRationalTF& tf, std::size_t channels) {
    in_.reserve(channels);
    out_.reserve(channels);
    for (std::size_t ch = 0; ch < channels; ++ch) {
        in_.emplace_back(tf.max_numerator_lag());
        out_.emplace_back(tf.max_denominator_lag());
    }
}

void FilterState::reset() {
    for (auto& r : in_) r.clear();
    for (auto& r : out_) r.clear();
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Fir: return "fir";
        case Stability::Stable: return "stable";
        case Stability::Marginal: return "marginal";
        case Stability::Unstable: return "unstable";
    }
    return "?";
}

AudioBlock tf_process_block(const SparseRationalTF& tf, FilterState& state,
                            const AudioBlock& block) {
    if (state.channels() != block.channels())
        throw ConfigError("filter state holds " + std::to_string(state.channels()) +
                          " channels, block has " + std::to_string(block.channels()));

    AudioBlock out = block;
    for (std::size_t ch = 0; ch < block.channels(); ++ch) {
        HistoryRing& xh = state.input(ch);
        HistoryRing& yh = state.output(ch);
        const auto& in = block.samples[ch];
        auto& dst = out.samples[ch];
        for (std::size_t n = 0; n < in.size(); ++n) {
            const double x = in[n];
            double acc = 0.0;
            for (const auto& tap : tf.numerator)
                acc += tap.coeff * (tap.lag == 0 ? x : xh.at(tap.lag));
            for (std::size_t i = 1; i < tf.denominator.size(); ++i) {
                const auto& tap = tf.denominator[i];
                acc -= tap.coeff * yh.at(tap.lag);
            }
            if (!std::isfinite(acc))
                throw NumericError("non-finite sample at channel " + std::to_string(ch) +
                                   ", frame " + std::to_string(n) +
                                   (tf.name.empty() ? "" : " in " + tf.name));
            xh.push(x);
            yh.push(acc);
            dst[n] = acc;
        }
    }
    return out;
}

std::vector<Sample> impulse_response(const SparseRationalTF& tf, std::size_t length) {
    if (length == 0) throw ConfigError("impulse response length must be >= 1");
    AudioBlock impulse(1, length, 44100);
    impulse.samples[0][0] = 1.0;
    FilterState state(tf, 1);
    return tf_process_block(tf, state, impulse).samples[0];
}

StabilityReport analyze_stability(const SparseRationalTF& tf) {
    StabilityReport report;
    if (tf.is_fir()) return report;

    std::size_t g = 0;
    for (std::size_t i = 1; i < tf.denominator.size(); ++i)
        g = std::gcd(g, tf.denominator[i].lag);
    report.reduced_lag_gcd = g;

    // Dense coefficients in w = z^gcd, highest power first; monic since the
    // lag-0 denominator entry is 1.
    const std::size_t degree = tf.max_denominator_lag() / g;
    std::vector<double> coeff(degree + 1, 0.0);
    for (const auto& tap : tf.denominator) coeff[tap.lag / g] = tap.coeff;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (std::size_t i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < degree; ++i)
        companion(i, degree - 1) = -coeff[degree - i];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    report.converged = solver.info() == Eigen::Success;
    if (!report.converged) {
        report.classification = Stability::Unstable;  // fail safe; results partial
        return report;
    }

    const auto& ev = solver.eigenvalues();
    report.poles.reserve(degree);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        report.poles.emplace_back(ev[i].real(), ev[i].imag());
    std::sort(report.poles.begin(), report.poles.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  return ma != mb ? ma > mb : a.imag() > b.imag();
              });

    double max_mag = 0.0;
    bool all_stable = true;
    for (const auto& p : report.poles) {
        const double m = std::abs(p);
        report.pole_magnitudes.push_back(m);
        max_mag = std::max(max_mag, m);
        if (m >= 1.0 - kStabilityEpsilon) all_stable = false;
    }
    if (all_stable)
        report.classification = Stability::Stable;
    else if (max_mag <= 1.0 + kStabilityEpsilon)
        report.classification = Stability::Marginal;
    else
        report.classification = Stability::Unstable;
    return report;
}

}  // namespace fx
