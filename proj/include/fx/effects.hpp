#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fx/dsp_core.hpp"

namespace fx {

struct EchoParams {
    double gain = 0.5;        // per-echo decay, |gain| < 1 for the infinite variant
    std::size_t spacing = 1;  // samples between echoes
    std::size_t echoes = 1;   // tap count, finite variant only

    bool operator==(const EchoParams&) const = default;
};

struct StressParams {
    double output_gain = 1.0;
    double feedback_gain = 0.414;  // in (0, 1)
    std::size_t delay = 1;         // samples; denominator reaches 3x this

    bool operator==(const StressParams&) const = default;
};

struct ReverbConfig {
    std::array<std::size_t, 4> comb_delays{1310, 1636, 1813, 1927};
    std::array<double, 4> comb_gains{0.81, 0.77, 0.75, 0.74};  // ignored when rt60_s is set
    std::array<std::size_t, 2> allpass_delays{347, 113};
    std::array<double, 2> allpass_gains{0.7, 0.7};
    double dry_gain = 1.0;
    std::vector<SparseTap> early_taps{{441, 0.4}, {882, 0.25}};
    std::optional<double> rt60_s = 1.0;  // derives comb gains: 0.001^(R / (fs * rt60))

    bool operator==(const ReverbConfig&) const = default;
};

// Effect graphs are trees of filters: series chains of elements, where an
// element is either a single filter node or a parallel group whose path
// outputs are summed. Feedback lives only inside nodes.
struct GraphElement;

struct SeriesChain {
    std::vector<GraphElement> elements;
};

struct ParallelGroup {
    std::vector<SeriesChain> paths;
};

struct FilterNode {
    SparseRationalTF tf;
    FilterState state;
};

struct GraphElement {
    std::variant<FilterNode, ParallelGroup> node;
};

struct EffectGraph {
    SeriesChain root;
    std::uint32_t sample_rate_hz = 44100;
    double output_gain = 1.0;

    // Zeroes every filter history; keeps topology and coefficients.
    void reset();
};

// H = sum_{k<N} gain^k z^(-k R): N echoes spaced R apart, geometric decay.
SparseRationalTF make_multi_echo(const EchoParams& p);

// H = 1 / (1 - gain z^(-R)); requires |gain| < 1.
SparseRationalTF make_infinite_echo(const EchoParams& p);

// H = z^(-R) / (1 - g z^(-R)).
SparseRationalTF make_comb(double g, std::size_t delay);

// H = (-g + z^(-R)) / (1 - g z^(-R)); unit magnitude at all frequencies.
SparseRationalTF make_allpass(double g, std::size_t delay);

// FIR sum of delayed copies; taps must have distinct delays and include
// a delay-0 tap.
SparseRationalTF make_chorus(std::vector<SparseTap> taps);

// H = K (1 + g z^(-D)) / (1 + g z^(-D) - g z^(-2D) - z^(-3D)).
// Marginally stable by construction: all poles on the unit circle.
SparseRationalTF make_stress_generator(const StressParams& p);

// Dry + early-reflection FIR in parallel with four combs feeding two
// series allpass diffusers.
EffectGraph make_schroeder_reverb(const ReverbConfig& cfg, std::uint32_t sample_rate_hz);

// Reverb and chorus driven from one input, outputs summed.
EffectGraph make_reverberated_chorus(std::vector<SparseTap> chorus_taps,
                                     const ReverbConfig& reverb_cfg,
                                     std::uint32_t sample_rate_hz);

// Topological evaluation: series chained, parallel paths summed, then the
// graph output gain. Block-size invariant. Throws ConfigError on sample-rate
// or channel mismatch.
AudioBlock process_graph(EffectGraph& graph, const AudioBlock& block);

// Wraps a transfer function as a graph element with empty state.
GraphElement graph_node(SparseRationalTF tf);

// Derived comb gain for a target decay time.
double comb_gain_for_rt60(std::size_t delay, std::uint32_t sample_rate_hz, double rt60_s);

}  // namespace fx
