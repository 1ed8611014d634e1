#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fx/dsp_core.hpp"
#include "fx/effects.hpp"
#include "fx/errors.hpp"

namespace fx {

enum class Pacing { RealtimeClock, AsFastAsPossible };

enum class ScheduleMode { IdleTask, CriticalTask };

const char* to_string(ScheduleMode m);
const char* to_string(Pacing p);

struct StreamConfig {
    std::size_t block_frames = 512;  // >= 16
    std::uint32_t sample_rate_hz = 44100;
    Pacing pacing = Pacing::RealtimeClock;
    std::size_t run_blocks = 0;        // informational; streams end at source exhaustion
    std::size_t queue_capacity = 8;    // IdleTask queue depth; overflow counts as a miss
    double watchdog_s = 5.0;           // per-handoff liveness bound

    double deadline_s() const {
        return static_cast<double>(block_frames) / sample_rate_hz;
    }
};

struct LoadProfile {
    unsigned worker_count = 0;
    double duty_cycle = 0.0;  // fraction of wall time each worker burns
};

struct ScheduleReport {
    std::size_t blocks_processed = 0;
    std::size_t deadline_misses = 0;
    std::size_t queue_overflows = 0;
    std::vector<double> latencies_us;  // per block, ready instant to written instant
    double latency_mean_us = 0.0;
    double latency_p95_us = 0.0;
    double latency_max_us = 0.0;
    double jitter_us = 0.0;  // latency standard deviation
    std::uint64_t output_checksum = 0;
};

struct ComparisonReport {
    ScheduleReport idle;
    ScheduleReport critical;
    bool critical_no_worse = false;  // critical misses <= idle misses
};

// Stream failure carrying whatever was measured before the fault.
struct StreamError : std::runtime_error {
    StreamError(const std::string& what, ScheduleReport partial)
        : std::runtime_error(what), partial_report(std::move(partial)) {}
    ScheduleReport partial_report;
};

class BlockSource {
public:
    virtual ~BlockSource() = default;
    virtual std::optional<AudioBlock> next() = 0;
};

class BlockSink {
public:
    virtual ~BlockSink() = default;
    virtual void write(const AudioBlock& block) = 0;
    // Hash of everything written so far; sinks that do not track one return 0.
    virtual std::uint64_t checksum() const { return 0; }
};

class MemorySource final : public BlockSource {
public:
    explicit MemorySource(std::vector<AudioBlock> blocks) : blocks_(std::move(blocks)) {}
    std::optional<AudioBlock> next() override;

private:
    std::vector<AudioBlock> blocks_;
    std::size_t pos_ = 0;
};

// Accumulates a checksum of everything written; optionally keeps the blocks.
class ChecksumSink final : public BlockSink {
public:
    explicit ChecksumSink(bool keep_blocks = false) : keep_(keep_blocks) {}
    void write(const AudioBlock& block) override;

    std::uint64_t checksum() const override { return hash_; }
    const std::vector<AudioBlock>& blocks() const { return kept_; }

private:
    bool keep_;
    std::uint64_t hash_ = 0xcbf29ce484222325ull;  // FNV-1a offset basis
    std::vector<AudioBlock> kept_;
};

std::uint64_t fold_block_checksum(std::uint64_t h, const AudioBlock& block);

// Streams source through the chain into the sink under one scheduling mode,
// with load workers contending for the CPU. Every block is processed exactly
// once, in order; output samples depend only on (chain, input). A block whose
// write completes later than one block period after its ready instant counts
// as a deadline miss; in IdleTask mode a full queue at the ready instant also
// counts. Throws StreamError (partial report attached) on source/sink faults
// or a watchdog-level stall.
ScheduleReport run_stream(EffectGraph& chain, BlockSource& source, BlockSink& sink,
                          ScheduleMode mode, const LoadProfile& load,
                          const StreamConfig& cfg);

// Runs both modes over the same input (chain state reset in between) and
// reports them side by side.
ComparisonReport compare_modes(EffectGraph& chain, const std::vector<AudioBlock>& input,
                               const LoadProfile& load, const StreamConfig& cfg);

}  // namespace fx
