#include "fx/audio_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace fx {

namespace {

// --- little-endian buffer helpers -----------------------------------------

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const std::string& buf, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(buf[off]) |
                                      (static_cast<unsigned char>(buf[off + 1]) << 8));
}

std::uint32_t get_u32(const std::string& buf, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<unsigned char>(buf[off + static_cast<std::size_t>(i)]);
    return v;
}

std::int16_t pcm16_from_sample(double x, std::size_t& clip_count) {
    const double ideal = std::round(x * 32768.0);  // halves away from zero
    double v = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    v = std::clamp(v, -32768.0, 32767.0);
    if (v != ideal) ++clip_count;
    return static_cast<std::int16_t>(v);
}

void validate_wav_spec(const WavSpec& spec) {
    if (spec.channels != 1 && spec.channels != 2)
        throw ConfigError("wav spec supports 1 or 2 channels");
    if (spec.sample_rate_hz < 8000 || spec.sample_rate_hz > 192000)
        throw ConfigError("wav sample rate must lie in [8000, 192000]");
}

}  // namespace

std::pair<WavSpec, AudioBlock> read_wav(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << file.rdbuf();
    const std::string buf = ss.str();

    if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
        buf.compare(8, 4, "WAVE") != 0)
        throw ParseError(path.string() + ": malformed header, not a RIFF/WAVE file");

    WavSpec spec;
    std::uint16_t bits = 0;
    bool have_fmt = false;
    std::size_t off = 12;
    while (true) {
        if (off + 8 > buf.size())
            throw ParseError(path.string() + ": truncated at byte offset " +
                             std::to_string(off) + ", no data chunk found");
        const std::string id = buf.substr(off, 4);
        const std::uint32_t chunk_size = get_u32(buf, off + 4);
        off += 8;

        if (id == "fmt ") {
            if (off + chunk_size > buf.size() || chunk_size < 16)
                throw ParseError(path.string() + ": truncated fmt chunk at byte offset " +
                                 std::to_string(off));
            const std::uint16_t code = get_u16(buf, off);
            if (code != 1 && code != 3)
                throw ParseError(path.string() + ": unsupported encoding, fmt code " +
                                 std::to_string(code));
            spec.codec = static_cast<WavCodec>(code);
            spec.channels = get_u16(buf, off + 2);
            spec.sample_rate_hz = get_u32(buf, off + 4);
            bits = get_u16(buf, off + 14);
            if (code == 1 && bits != 16)
                throw ParseError(path.string() + ": unsupported encoding, " +
                                 std::to_string(bits) + "-bit PCM");
            if (code == 3 && bits != 32)
                throw ParseError(path.string() + ": unsupported encoding, " +
                                 std::to_string(bits) + "-bit float");
            try {
                validate_wav_spec(spec);
            } catch (const ConfigError& e) {
                throw ParseError(path.string() + ": unsupported encoding, " + e.what());
            }
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt)
                throw ParseError(path.string() +
                                 ": malformed header, data chunk precedes fmt");
            if (off + chunk_size > buf.size())
                throw ParseError(path.string() + ": truncated data chunk at byte offset " +
                                 std::to_string(buf.size()) + ", expected " +
                                 std::to_string(chunk_size) + " bytes from offset " +
                                 std::to_string(off));
            const std::size_t bytes_per = bits / 8;
            const std::size_t frame_bytes = bytes_per * spec.channels;
            const std::size_t frames = frame_bytes == 0 ? 0 : chunk_size / frame_bytes;
            AudioBlock audio(spec.channels, frames, spec.sample_rate_hz);
            for (std::size_t n = 0; n < frames; ++n)
                for (std::size_t ch = 0; ch < spec.channels; ++ch) {
                    const std::size_t at = off + n * frame_bytes + ch * bytes_per;
                    if (spec.codec == WavCodec::Pcm16) {
                        const auto v = static_cast<std::int16_t>(get_u16(buf, at));
                        audio.samples[ch][n] = static_cast<double>(v) / 32768.0;
                    } else {
                        float f;
                        std::uint32_t raw = get_u32(buf, at);
                        std::memcpy(&f, &raw, sizeof f);
                        audio.samples[ch][n] = static_cast<double>(f);
                    }
                }
            return {spec, std::move(audio)};
        } else {
            off += chunk_size + (chunk_size % 2);  // skip unknown chunk + pad byte
            continue;
        }
        off += chunk_size + (chunk_size % 2);
    }
}

std::size_t write_wav(const std::filesystem::path& path, const WavSpec& spec,
                      const AudioBlock& audio) {
    validate_wav_spec(spec);
    if (audio.channels() != spec.channels)
        throw ConfigError("audio channel count does not match wav spec");
    if (audio.sample_rate_hz != spec.sample_rate_hz)
        throw ConfigError("audio sample rate does not match wav spec");
    for (const auto& channel : audio.samples)
        for (double s : channel)
            if (!std::isfinite(s))
                throw NumericError("refusing to write non-finite sample to " +
                                   path.string());

    const std::uint16_t bits = spec.codec == WavCodec::Pcm16 ? 16 : 32;
    const std::uint16_t frame_bytes = static_cast<std::uint16_t>(bits / 8 * spec.channels);
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(audio.frames() * frame_bytes);

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    put_u32(out, 36 + data_size);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, static_cast<std::uint16_t>(spec.codec));
    put_u16(out, spec.channels);
    put_u32(out, spec.sample_rate_hz);
    put_u32(out, spec.sample_rate_hz * frame_bytes);
    put_u16(out, frame_bytes);
    put_u16(out, bits);
    out += "data";
    put_u32(out, data_size);

    std::size_t clipped = 0;
    for (std::size_t n = 0; n < audio.frames(); ++n)
        for (std::size_t ch = 0; ch < audio.channels(); ++ch) {
            const double s = audio.samples[ch][n];
            if (spec.codec == WavCodec::Pcm16) {
                put_u16(out, static_cast<std::uint16_t>(pcm16_from_sample(s, clipped)));
            } else {
                const float f = static_cast<float>(s);
                std::uint32_t raw;
                std::memcpy(&raw, &f, sizeof raw);
                put_u32(out, raw);
            }
        }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot create " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("failed writing " + path.string());
    return clipped;
}

AudioBlock synth_impulse(std::size_t frames, std::uint32_t sample_rate_hz) {
    AudioBlock block(1, frames, sample_rate_hz);
    if (frames > 0) block.samples[0][0] = 1.0;
    return block;
}

AudioBlock synth_sine(double freq_hz, std::size_t frames, std::uint32_t sample_rate_hz) {
    AudioBlock block(1, frames, sample_rate_hz);
    const double w = 2.0 * M_PI * freq_hz / sample_rate_hz;
    for (std::size_t n = 0; n < frames; ++n)
        block.samples[0][n] = 0.5 * std::sin(w * static_cast<double>(n));
    return block;
}

AudioBlock synth_noise(std::uint64_t seed, std::size_t frames,
                       std::uint32_t sample_rate_hz) {
    AudioBlock block(1, frames, sample_rate_hz);
    std::mt19937_64 rng(seed);
    for (std::size_t n = 0; n < frames; ++n) {
        // top 53 bits -> [0, 1), portable across standard libraries
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        block.samples[0][n] = u - 0.5;
    }
    return block;
}

std::vector<AudioBlock> split_blocks(const AudioBlock& audio, std::size_t frames) {
    if (frames == 0) throw ConfigError("block size must be >= 1 frame");
    std::vector<AudioBlock> blocks;
    for (std::size_t start = 0; start < audio.frames(); start += frames) {
        const std::size_t len = std::min(frames, audio.frames() - start);
        AudioBlock b(audio.channels(), len, audio.sample_rate_hz);
        for (std::size_t ch = 0; ch < audio.channels(); ++ch)
            std::copy_n(audio.samples[ch].begin() + static_cast<std::ptrdiff_t>(start),
                        len, b.samples[ch].begin());
        blocks.push_back(std::move(b));
    }
    return blocks;
}

AudioBlock concat_blocks(const std::vector<AudioBlock>& blocks) {
    if (blocks.empty()) return {};
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.frames();
    AudioBlock out(blocks.front().channels(), total, blocks.front().sample_rate_hz);
    std::size_t at = 0;
    for (const auto& b : blocks) {
        if (b.channels() != out.channels())
            throw ConfigError("blocks disagree on channel count");
        for (std::size_t ch = 0; ch < out.channels(); ++ch)
            std::copy(b.samples[ch].begin(), b.samples[ch].end(),
                      out.samples[ch].begin() + static_cast<std::ptrdiff_t>(at));
        at += b.frames();
    }
    return out;
}

// --- chain configuration ---------------------------------------------------

namespace {

struct LineError : ParseError {
    using ParseError::ParseError;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw LineError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::size_t line, const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        fail(line, "invalid number for '" + key + "': '" + text + "'");
    return v;
}

std::size_t parse_delay(std::size_t line, const std::string& key, const std::string& text,
                        std::uint32_t rate) {
    if (text.size() > 2 && text.ends_with("ms")) {
        const double ms = parse_number(line, key, text.substr(0, text.size() - 2));
        if (ms < 0) fail(line, "'" + key + "' must be non-negative");
        return static_cast<std::size_t>(std::llround(ms * rate / 1000.0));
    }
    std::size_t v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        fail(line, "invalid delay for '" + key + "': '" + text + "' (samples or <x>ms)");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = text.find(sep, start);
        if (at == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, at - start));
        start = at + 1;
    }
}

std::vector<SparseTap> parse_tap_list(std::size_t line, const std::string& key,
                                      const std::string& text, std::uint32_t rate) {
    std::vector<SparseTap> taps;
    if (text.empty()) return taps;
    for (const auto& part : split(text, ',')) {
        const auto fields = split(part, ':');
        if (fields.size() != 2)
            fail(line, "'" + key + "' entries must be <delay>:<gain>, got '" + part + "'");
        taps.push_back({parse_delay(line, key, fields[0], rate),
                        parse_number(line, key, fields[1])});
    }
    return taps;
}

std::vector<std::size_t> parse_delay_list(std::size_t line, const std::string& key,
                                          const std::string& text, std::uint32_t rate,
                                          std::size_t expected) {
    const auto parts = split(text, ',');
    if (parts.size() != expected)
        fail(line, "'" + key + "' expects " + std::to_string(expected) +
                       " comma-separated delays");
    std::vector<std::size_t> out;
    for (const auto& p : parts) out.push_back(parse_delay(line, key, p, rate));
    return out;
}

std::vector<double> parse_number_list(std::size_t line, const std::string& key,
                                      const std::string& text, std::size_t expected) {
    const auto parts = split(text, ',');
    if (parts.size() != expected)
        fail(line, "'" + key + "' expects " + std::to_string(expected) +
                       " comma-separated values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_number(line, key, p));
    return out;
}

// key=value pairs of one config line, consumed by the per-effect builders
class Params {
public:
    Params(std::size_t line, std::string kind) : line_(line), kind_(std::move(kind)) {}

    void add(const std::string& key, const std::string& value) {
        if (values_.count(key)) fail(line_, "duplicate parameter '" + key + "'");
        values_[key] = value;
    }

    const std::string* find(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const std::string& require(const std::string& key) {
        const std::string* v = find(key);
        if (!v) fail(line_, kind_ + " requires parameter '" + key + "'");
        return *v;
    }

    void finish() const {
        for (const auto& [key, value] : values_)
            if (!used_.count(key))
                fail(line_, "unknown parameter '" + key + "' for " + kind_);
    }

    std::size_t line() const { return line_; }
    const std::string& kind() const { return kind_; }

private:
    std::size_t line_;
    std::string kind_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

ReverbConfig parse_reverb_params(Params& p, std::uint32_t rate) {
    ReverbConfig cfg;
    const std::size_t line = p.line();
    if (const auto* v = p.find("comb_delays")) {
        const auto d = parse_delay_list(line, "comb_delays", *v, rate, 4);
        std::copy(d.begin(), d.end(), cfg.comb_delays.begin());
    }
    bool gains_given = false;
    if (const auto* v = p.find("comb_gains")) {
        const auto g = parse_number_list(line, "comb_gains", *v, 4);
        std::copy(g.begin(), g.end(), cfg.comb_gains.begin());
        gains_given = true;
    }
    if (const auto* v = p.find("allpass_delays")) {
        const auto d = parse_delay_list(line, "allpass_delays", *v, rate, 2);
        std::copy(d.begin(), d.end(), cfg.allpass_delays.begin());
    }
    if (const auto* v = p.find("allpass_gains")) {
        const auto g = parse_number_list(line, "allpass_gains", *v, 2);
        std::copy(g.begin(), g.end(), cfg.allpass_gains.begin());
    }
    if (const auto* v = p.find("dry")) cfg.dry_gain = parse_number(line, "dry", *v);
    if (const auto* v = p.find("early"))
        cfg.early_taps = parse_tap_list(line, "early", *v, rate);
    if (const auto* v = p.find("rt60"))
        cfg.rt60_s = parse_number(line, "rt60", *v);
    else if (gains_given)
        cfg.rt60_s.reset();  // explicit gains, no decay-time derivation
    return cfg;
}

EffectSpec parse_effect(Params& p, std::uint32_t rate) {
    const std::size_t line = p.line();
    const std::string& kind = p.kind();
    if (kind == "multi_echo") {
        EchoParams e;
        e.gain = parse_number(line, "alpha", p.require("alpha"));
        e.spacing = parse_delay(line, "R", p.require("R"), rate);
        const double n = parse_number(line, "N", p.require("N"));
        if (n < 1 || n != std::floor(n)) fail(line, "'N' must be a positive integer");
        e.echoes = static_cast<std::size_t>(n);
        return MultiEchoSpec{e};
    }
    if (kind == "infinite_echo") {
        InfiniteEchoSpec s;
        s.gain = parse_number(line, "alpha", p.require("alpha"));
        s.spacing = parse_delay(line, "R", p.require("R"), rate);
        return s;
    }
    if (kind == "comb") {
        CombSpec s;
        s.gain = parse_number(line, "g", p.require("g"));
        s.delay = parse_delay(line, "R", p.require("R"), rate);
        return s;
    }
    if (kind == "allpass") {
        AllpassSpec s;
        s.gain = parse_number(line, "g", p.require("g"));
        s.delay = parse_delay(line, "R", p.require("R"), rate);
        return s;
    }
    if (kind == "stress") {
        StressParams s;
        s.output_gain = parse_number(line, "K", p.require("K"));
        s.feedback_gain = parse_number(line, "g", p.require("g"));
        s.delay = parse_delay(line, "D", p.require("D"), rate);
        return StressSpec{s};
    }
    if (kind == "reverb") return ReverbSpec{parse_reverb_params(p, rate)};
    if (kind == "chorus") {
        ChorusSpec s;
        if (const auto* v = p.find("taps"))
            s.taps = parse_tap_list(line, "taps", *v, rate);
        return s;
    }
    if (kind == "reverberated_chorus") {
        ReverberatedChorusSpec s;
        if (const auto* v = p.find("taps"))
            s.taps = parse_tap_list(line, "taps", *v, rate);
        s.reverb = parse_reverb_params(p, rate);
        return s;
    }
    fail(line, "unknown effect kind '" + kind + "'");
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

std::string render_taps(const std::vector<SparseTap>& taps) {
    std::string out;
    for (std::size_t i = 0; i < taps.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(taps[i].lag) + ':' + format_number(taps[i].coeff);
    }
    return out;
}

std::string render_reverb_params(const ReverbConfig& cfg) {
    std::string out;
    out += " comb_delays=";
    for (std::size_t i = 0; i < cfg.comb_delays.size(); ++i)
        out += (i ? "," : "") + std::to_string(cfg.comb_delays[i]);
    out += " comb_gains=";
    for (std::size_t i = 0; i < cfg.comb_gains.size(); ++i)
        out += (i ? "," : "") + format_number(cfg.comb_gains[i]);
    out += " allpass_delays=";
    for (std::size_t i = 0; i < cfg.allpass_delays.size(); ++i)
        out += (i ? "," : "") + std::to_string(cfg.allpass_delays[i]);
    out += " allpass_gains=";
    for (std::size_t i = 0; i < cfg.allpass_gains.size(); ++i)
        out += (i ? "," : "") + format_number(cfg.allpass_gains[i]);
    out += " dry=" + format_number(cfg.dry_gain);
    out += " early=" + render_taps(cfg.early_taps);
    if (cfg.rt60_s) out += " rt60=" + format_number(*cfg.rt60_s);
    return out;
}

}  // namespace

const char* effect_kind_name(const EffectSpec& spec) {
    struct Namer {
        const char* operator()(const MultiEchoSpec&) const { return "multi_echo"; }
        const char* operator()(const InfiniteEchoSpec&) const { return "infinite_echo"; }
        const char* operator()(const CombSpec&) const { return "comb"; }
        const char* operator()(const AllpassSpec&) const { return "allpass"; }
        const char* operator()(const ReverbSpec&) const { return "reverb"; }
        const char* operator()(const StressSpec&) const { return "stress"; }
        const char* operator()(const ChorusSpec&) const { return "chorus"; }
        const char* operator()(const ReverberatedChorusSpec&) const {
            return "reverberated_chorus";
        }
    };
    return std::visit(Namer{}, spec);
}

ChainConfig parse_chain_config(const std::string& text,
                               std::optional<std::uint32_t> rate_override) {
    ChainConfig cfg;
    if (rate_override) cfg.sample_rate_hz = *rate_override;

    std::istringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    bool saw_effect = false;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream words(raw);
        std::vector<std::string> tokens;
        for (std::string w; words >> w;) tokens.push_back(std::move(w));
        if (tokens.empty()) continue;

        const std::string& head = tokens.front();
        if (head.starts_with("rate=") || head.starts_with("gain=")) {
            if (tokens.size() != 1) fail(line_no, "header lines take a single key=value");
            if (saw_effect) fail(line_no, "headers must precede effect lines");
            const std::string key = head.substr(0, 4);
            const std::string value = head.substr(5);
            if (key == "rate") {
                const double r = parse_number(line_no, "rate", value);
                if (r < 1 || r != std::floor(r))
                    fail(line_no, "'rate' must be a positive integer");
                if (!rate_override) cfg.sample_rate_hz = static_cast<std::uint32_t>(r);
            } else {
                cfg.output_gain = parse_number(line_no, "gain", value);
            }
            continue;
        }

        Params params(line_no, head);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const std::string& tok = tokens[i];
            const std::size_t eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                fail(line_no, "expected key=value, got '" + tok + "'");
            params.add(tok.substr(0, eq), tok.substr(eq + 1));
        }
        EffectSpec spec = parse_effect(params, cfg.sample_rate_hz);
        params.finish();
        try {
            build_effect(spec, cfg.sample_rate_hz);  // full range validation
        } catch (const ConfigError& e) {
            fail(line_no, e.what());
        }
        cfg.effects.push_back(std::move(spec));
        saw_effect = true;
    }
    return cfg;
}

ChainConfig load_chain_config(const std::filesystem::path& path,
                              std::optional<std::uint32_t> rate_override) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << file.rdbuf();
    try {
        return parse_chain_config(ss.str(), rate_override);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string render_chain_config(const ChainConfig& cfg) {
    std::string out = "rate=" + std::to_string(cfg.sample_rate_hz) + "\n";
    out += "gain=" + format_number(cfg.output_gain) + "\n";
    for (const auto& spec : cfg.effects) {
        out += effect_kind_name(spec);
        std::visit(
            [&out](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, MultiEchoSpec>) {
                    out += " alpha=" + format_number(s.params.gain);
                    out += " R=" + std::to_string(s.params.spacing);
                    out += " N=" + std::to_string(s.params.echoes);
                } else if constexpr (std::is_same_v<T, InfiniteEchoSpec>) {
                    out += " alpha=" + format_number(s.gain);
                    out += " R=" + std::to_string(s.spacing);
                } else if constexpr (std::is_same_v<T, CombSpec> ||
                                     std::is_same_v<T, AllpassSpec>) {
                    out += " g=" + format_number(s.gain);
                    out += " R=" + std::to_string(s.delay);
                } else if constexpr (std::is_same_v<T, StressSpec>) {
                    out += " K=" + format_number(s.params.output_gain);
                    out += " g=" + format_number(s.params.feedback_gain);
                    out += " D=" + std::to_string(s.params.delay);
                } else if constexpr (std::is_same_v<T, ReverbSpec>) {
                    out += render_reverb_params(s.config);
                } else if constexpr (std::is_same_v<T, ChorusSpec>) {
                    out += " taps=" + render_taps(s.taps);
                } else if constexpr (std::is_same_v<T, ReverberatedChorusSpec>) {
                    out += " taps=" + render_taps(s.taps);
                    out += render_reverb_params(s.reverb);
                }
            },
            spec);
        out += "\n";
    }
    return out;
}

GraphElement build_effect(const EffectSpec& spec, std::uint32_t sample_rate_hz) {
    struct Builder {
        std::uint32_t rate;
        GraphElement operator()(const MultiEchoSpec& s) const {
            return graph_node(make_multi_echo(s.params));
        }
        GraphElement operator()(const InfiniteEchoSpec& s) const {
            return graph_node(make_infinite_echo({.gain = s.gain, .spacing = s.spacing}));
        }
        GraphElement operator()(const CombSpec& s) const {
            return graph_node(make_comb(s.gain, s.delay));
        }
        GraphElement operator()(const AllpassSpec& s) const {
            return graph_node(make_allpass(s.gain, s.delay));
        }
        GraphElement operator()(const ReverbSpec& s) const {
            EffectGraph g = make_schroeder_reverb(s.config, rate);
            return std::move(g.root.elements.front());
        }
        GraphElement operator()(const StressSpec& s) const {
            return graph_node(make_stress_generator(s.params));
        }
        GraphElement operator()(const ChorusSpec& s) const {
            return graph_node(make_chorus(s.taps));
        }
        GraphElement operator()(const ReverberatedChorusSpec& s) const {
            EffectGraph g = make_reverberated_chorus(s.taps, s.reverb, rate);
            return std::move(g.root.elements.front());
        }
    };
    return std::visit(Builder{sample_rate_hz}, spec);
}

EffectGraph build_chain(const ChainConfig& cfg) {
    EffectGraph graph;
    graph.sample_rate_hz = cfg.sample_rate_hz;
    graph.output_gain = cfg.output_gain;
    for (const auto& spec : cfg.effects)
        graph.root.elements.push_back(build_effect(spec, cfg.sample_rate_hz));
    return graph;
}

}  // namespace fx
