#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "fx/dsp_core.hpp"
#include "fx/effects.hpp"

namespace fx {

enum class WavCodec : std::uint16_t {
    Pcm16 = 1,    // RIFF fmt code 1, 16 bits
    Float32 = 3,  // RIFF fmt code 3, 32 bits
};

struct WavSpec {
    std::uint16_t channels = 1;  // 1 or 2
    std::uint32_t sample_rate_hz = 44100;
    WavCodec codec = WavCodec::Float32;

    bool operator==(const WavSpec&) const = default;
};

// Reads a whole RIFF/WAVE file; 16-bit value v maps to v / 32768, floats pass
// through. Unknown chunks are skipped. Throws IoError when the file cannot be
// opened, ParseError for malformed headers, unsupported encodings, or data
// shorter than declared (the message carries the byte offset).
std::pair<WavSpec, AudioBlock> read_wav(const std::filesystem::path& path);

// Writes a RIFF/WAVE file with exactly fmt + data chunks. 16-bit samples are
// clamped to full scale and rounded half away from zero; the return value
// counts clamped samples. Non-finite samples are refused (NumericError).
std::size_t write_wav(const std::filesystem::path& path, const WavSpec& spec,
                      const AudioBlock& audio);

// Mono test stimuli.
AudioBlock synth_impulse(std::size_t frames, std::uint32_t sample_rate_hz);
AudioBlock synth_sine(double freq_hz, std::size_t frames, std::uint32_t sample_rate_hz);
AudioBlock synth_noise(std::uint64_t seed, std::size_t frames, std::uint32_t sample_rate_hz);

// Cuts one block into consecutive blocks of at most `frames` frames.
std::vector<AudioBlock> split_blocks(const AudioBlock& audio, std::size_t frames);
AudioBlock concat_blocks(const std::vector<AudioBlock>& blocks);

// --- chain configuration -------------------------------------------------

struct MultiEchoSpec {
    EchoParams params;
    bool operator==(const MultiEchoSpec&) const = default;
};
struct InfiniteEchoSpec {
    double gain = 0.5;
    std::size_t spacing = 1;
    bool operator==(const InfiniteEchoSpec&) const = default;
};
struct CombSpec {
    double gain = 0.5;
    std::size_t delay = 1;
    bool operator==(const CombSpec&) const = default;
};
struct AllpassSpec {
    double gain = 0.7;
    std::size_t delay = 1;
    bool operator==(const AllpassSpec&) const = default;
};
struct ReverbSpec {
    ReverbConfig config;
    bool operator==(const ReverbSpec&) const = default;
};
struct StressSpec {
    StressParams params;
    bool operator==(const StressSpec&) const = default;
};
struct ChorusSpec {
    std::vector<SparseTap> taps{{0, 1.0}, {661, 0.7}, {1323, 0.5}};
    bool operator==(const ChorusSpec&) const = default;
};
struct ReverberatedChorusSpec {
    std::vector<SparseTap> taps{{0, 1.0}, {661, 0.7}, {1323, 0.5}};
    ReverbConfig reverb;
    bool operator==(const ReverberatedChorusSpec&) const = default;
};

using EffectSpec = std::variant<MultiEchoSpec, InfiniteEchoSpec, CombSpec, AllpassSpec,
                                ReverbSpec, StressSpec, ChorusSpec, ReverberatedChorusSpec>;

// Ordered effect list applied in series, plus the global rate and output gain.
struct ChainConfig {
    std::uint32_t sample_rate_hz = 44100;
    double output_gain = 1.0;
    std::vector<EffectSpec> effects;

    bool operator==(const ChainConfig&) const = default;
};

const char* effect_kind_name(const EffectSpec& spec);

// Line-oriented text format: optional `rate=<hz>` / `gain=<g>` headers, then
// one `<effect_kind> key=value ...` per line; `#` starts a comment. Delays are
// samples unless suffixed `ms`. Errors carry the line number and field.
// A rate override replaces the config's sample rate before any ms conversion.
ChainConfig parse_chain_config(const std::string& text,
                               std::optional<std::uint32_t> rate_override = {});
ChainConfig load_chain_config(const std::filesystem::path& path,
                              std::optional<std::uint32_t> rate_override = {});

// Canonical serialization; parse(render(c)) == c for every valid config.
std::string render_chain_config(const ChainConfig& cfg);

// Series graph over the whole chain; empty config is a passthrough.
EffectGraph build_chain(const ChainConfig& cfg);

// Graph for one effect at the given rate (trial-constructed during parsing).
GraphElement build_effect(const EffectSpec& spec, std::uint32_t sample_rate_hz);

}  // namespace fx
