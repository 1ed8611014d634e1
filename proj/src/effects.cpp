#include "fx/effects.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace fx {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

GraphElement node_of(SparseRationalTF tf) { return graph_node(std::move(tf)); }

void reset_chain(SeriesChain& chain);

void reset_element(GraphElement& el) {
    if (auto* node = std::get_if<FilterNode>(&el.node)) {
        node->state.reset();
    } else {
        for (auto& path : std::get<ParallelGroup>(el.node).paths) reset_chain(path);
    }
}

void reset_chain(SeriesChain& chain) {
    for (auto& el : chain.elements) reset_element(el);
}

AudioBlock process_chain(SeriesChain& chain, AudioBlock block);

AudioBlock process_element(GraphElement& el, AudioBlock block) {
    if (auto* node = std::get_if<FilterNode>(&el.node)) {
        if (node->state.channels() == 0)
            node->state = FilterState(node->tf, block.channels());
        return tf_process_block(node->tf, node->state, block);
    }
    auto& group = std::get<ParallelGroup>(el.node);
    AudioBlock sum(block.channels(), block.frames(), block.sample_rate_hz);
    for (auto& path : group.paths) {
        AudioBlock out = process_chain(path, block);
        for (std::size_t ch = 0; ch < sum.channels(); ++ch)
            for (std::size_t n = 0; n < sum.frames(); ++n)
                sum.samples[ch][n] += out.samples[ch][n];
    }
    return sum;
}

AudioBlock process_chain(SeriesChain& chain, AudioBlock block) {
    for (auto& el : chain.elements) block = process_element(el, std::move(block));
    return block;
}

}  // namespace

void EffectGraph::reset() { reset_chain(root); }

SparseRationalTF make_multi_echo(const EchoParams& p) {
    require(p.echoes >= 1, "multi echo needs at least one tap");
    require(p.spacing >= 1, "echo spacing must be >= 1 sample");
    require(std::isfinite(p.gain), "echo gain must be finite");
    std::vector<SparseTap> taps;
    taps.reserve(p.echoes);
    double coeff = 1.0;
    for (std::size_t k = 0; k < p.echoes; ++k) {
        taps.push_back({k * p.spacing, coeff});
        coeff *= p.gain;
    }
    return make_tf(std::move(taps), {{0, 1.0}}, "multi_echo");
}

SparseRationalTF make_infinite_echo(const EchoParams& p) {
    require(p.spacing >= 1, "echo spacing must be >= 1 sample");
    require(std::isfinite(p.gain) && std::abs(p.gain) < 1.0,
            "infinite echo requires |gain| < 1");
    return make_tf({{0, 1.0}}, {{0, 1.0}, {p.spacing, -p.gain}}, "infinite_echo");
}

SparseRationalTF make_comb(double g, std::size_t delay) {
    require(delay >= 1, "comb delay must be >= 1 sample");
    require(g > 0.0 && g < 1.0, "comb gain must lie in (0, 1)");
    return make_tf({{delay, 1.0}}, {{0, 1.0}, {delay, -g}}, "comb");
}

SparseRationalTF make_allpass(double g, std::size_t delay) {
    require(delay >= 1, "allpass delay must be >= 1 sample");
    require(g > 0.0 && g < 1.0, "allpass gain must lie in (0, 1)");
    return make_tf({{0, -g}, {delay, 1.0}}, {{0, 1.0}, {delay, -g}}, "allpass");
}

SparseRationalTF make_chorus(std::vector<SparseTap> taps) {
    require(!taps.empty(), "chorus needs at least one tap");
    std::sort(taps.begin(), taps.end(),
              [](const SparseTap& a, const SparseTap& b) { return a.lag < b.lag; });
    for (std::size_t i = 1; i < taps.size(); ++i)
        require(taps[i].lag != taps[i - 1].lag, "chorus tap delays must be distinct");
    require(taps.front().lag == 0, "chorus needs a delay-0 dry tap");
    return make_tf(std::move(taps), {{0, 1.0}}, "chorus");
}

SparseRationalTF make_stress_generator(const StressParams& p) {
    require(p.feedback_gain > 0.0 && p.feedback_gain < 1.0,
            "stress feedback gain must lie in (0, 1)");
    require(p.delay >= 1, "stress delay must be >= 1 sample");
    require(std::isfinite(p.output_gain) && p.output_gain != 0.0,
            "stress output gain must be finite and nonzero");
    require(3 * p.delay <= kMaxLag, "stress delay exceeds capacity at 3x lag");
    const double k = p.output_gain;
    const double g = p.feedback_gain;
    const std::size_t d = p.delay;
    return make_tf({{0, k}, {d, k * g}},
                   {{0, 1.0}, {d, g}, {2 * d, -g}, {3 * d, -1.0}}, "stress");
}

double comb_gain_for_rt60(std::size_t delay, std::uint32_t sample_rate_hz, double rt60_s) {
    // -60 dB after rt60 seconds of recirculation
    return std::pow(0.001, static_cast<double>(delay) / (sample_rate_hz * rt60_s));
}

EffectGraph make_schroeder_reverb(const ReverbConfig& cfg, std::uint32_t sample_rate_hz) {
    require(sample_rate_hz > 0, "sample rate must be positive");
    std::set<std::size_t> distinct(cfg.comb_delays.begin(), cfg.comb_delays.end());
    require(distinct.size() == cfg.comb_delays.size(),
            "comb delays must be pairwise distinct");

    std::array<double, 4> comb_gains = cfg.comb_gains;
    if (cfg.rt60_s) {
        require(*cfg.rt60_s > 0.0, "rt60 must be positive");
        for (std::size_t i = 0; i < comb_gains.size(); ++i)
            comb_gains[i] = comb_gain_for_rt60(cfg.comb_delays[i], sample_rate_hz,
                                               *cfg.rt60_s);
    }
    for (double g : comb_gains)
        require(g > 0.0 && g < 1.0, "comb gain must lie in (0, 1)");

    // Direct path plus early reflections, as one FIR.
    std::vector<SparseTap> direct{{0, cfg.dry_gain}};
    for (const auto& tap : cfg.early_taps) direct.push_back(tap);
    std::sort(direct.begin(), direct.end(),
              [](const SparseTap& a, const SparseTap& b) { return a.lag < b.lag; });

    ParallelGroup combs;
    for (std::size_t i = 0; i < cfg.comb_delays.size(); ++i)
        combs.paths.push_back(
            {{node_of(make_comb(comb_gains[i], cfg.comb_delays[i]))}});

    SeriesChain wet;
    wet.elements.push_back(GraphElement{std::move(combs)});
    for (std::size_t i = 0; i < cfg.allpass_delays.size(); ++i)
        wet.elements.push_back(
            node_of(make_allpass(cfg.allpass_gains[i], cfg.allpass_delays[i])));

    ParallelGroup split;
    split.paths.push_back({{node_of(make_tf(std::move(direct), {{0, 1.0}}, "direct"))}});
    split.paths.push_back(std::move(wet));

    EffectGraph graph;
    graph.sample_rate_hz = sample_rate_hz;
    graph.root.elements.push_back(GraphElement{std::move(split)});
    return graph;
}

EffectGraph make_reverberated_chorus(std::vector<SparseTap> chorus_taps,
                                     const ReverbConfig& reverb_cfg,
                                     std::uint32_t sample_rate_hz) {
    EffectGraph reverb = make_schroeder_reverb(reverb_cfg, sample_rate_hz);

    ParallelGroup split;
    split.paths.push_back(std::move(reverb.root));
    split.paths.push_back({{node_of(make_chorus(std::move(chorus_taps)))}});

    EffectGraph graph;
    graph.sample_rate_hz = sample_rate_hz;
    graph.root.elements.push_back(GraphElement{std::move(split)});
    return graph;
}

GraphElement graph_node(SparseRationalTF tf) {
    return GraphElement{FilterNode{std::move(tf), FilterState{}}};
}

AudioBlock process_graph(EffectGraph& graph, const AudioBlock& block) {
    if (block.sample_rate_hz != graph.sample_rate_hz)
        throw ConfigError("block rate " + std::to_string(block.sample_rate_hz) +
                          " does not match graph rate " +
                          std::to_string(graph.sample_rate_hz));
    AudioBlock out = process_chain(graph.root, block);
    if (graph.output_gain != 1.0)
        for (auto& channel : out.samples)
            for (auto& s : channel) s *= graph.output_gain;
    return out;
}

}  // namespace fx
