#include "fx/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <mutex>
#include <semaphore>
#include <string>
#include <thread>

#ifdef __linux__
#include <sys/resource.h>
#include <sys/syscall.h>
#include <unistd.h>
#endif

namespace fx {

namespace {

using Clock = std::chrono::steady_clock;
using TimePoint = Clock::time_point;

// Best effort only; the scheduling contract does not depend on it.
void set_thread_niceness(int niceness) {
#ifdef __linux__
    setpriority(PRIO_PROCESS, static_cast<id_t>(syscall(SYS_gettid)), niceness);
#else
    (void)niceness;
#endif
}

struct StreamItem {
    AudioBlock block;
    TimePoint ready{};
    double deadline_s = 0.0;
    bool overflowed = false;
};

// Compute-burning contenders standing in for the rest of the system.
// In CriticalTask mode they honor the ceiling and pause while a block is
// pending or processing; in IdleTask mode the ceiling is never raised.
class LoadRig {
public:
    explicit LoadRig(const LoadProfile& profile) {
        if (profile.duty_cycle < 0.0 || profile.duty_cycle > 1.0)
            throw ConfigError("load duty cycle must lie in [0, 1]");
        const auto cycle = std::chrono::microseconds(5000);
        const auto burn_len = std::chrono::duration_cast<std::chrono::microseconds>(
            cycle * profile.duty_cycle);
        const auto rest_len = cycle - burn_len;
        for (unsigned i = 0; i < profile.worker_count; ++i) {
            workers_.emplace_back([this, burn_len, rest_len] {
                while (!stop_.load(std::memory_order_relaxed)) {
                    if (ceiling_.load(std::memory_order_acquire)) {
                        std::this_thread::sleep_for(std::chrono::microseconds(50));
                        continue;
                    }
                    if (burn_len.count() > 0) {
                        burning_.fetch_add(1, std::memory_order_relaxed);
                        const TimePoint end = Clock::now() + burn_len;
                        while (Clock::now() < end &&
                               !stop_.load(std::memory_order_relaxed) &&
                               !ceiling_.load(std::memory_order_acquire)) {
                            volatile double x = 1.0;
                            for (int k = 0; k < 400; ++k) x = x * 1.0000001 + 1e-9;
                        }
                        burning_.fetch_sub(1, std::memory_order_relaxed);
                    }
                    if (rest_len.count() > 0) std::this_thread::sleep_for(rest_len);
                }
            });
        }
    }

    ~LoadRig() { stop(); }

    void stop() {
        stop_.store(true, std::memory_order_relaxed);
        for (auto& w : workers_)
            if (w.joinable()) w.join();
        workers_.clear();
    }

    bool any_runnable() const { return burning_.load(std::memory_order_relaxed) > 0; }
    void raise_ceiling() { ceiling_.store(true, std::memory_order_release); }
    void lower_ceiling() { ceiling_.store(false, std::memory_order_release); }

private:
    std::vector<std::thread> workers_;
    std::atomic<bool> stop_{false};
    std::atomic<bool> ceiling_{false};
    std::atomic<int> burning_{0};
};

struct RunStats {
    std::size_t blocks = 0;
    std::size_t misses = 0;
    std::size_t overflows = 0;
    std::vector<double> latencies_us;
};

// Worker-side failure or watchdog stall, surfaced after all threads join.
class StreamFault {
public:
    void capture() {
        std::lock_guard lock(m_);
        if (!eptr_) eptr_ = std::current_exception();
        aborted_.store(true, std::memory_order_release);
    }
    void mark_stall(const char* msg) {
        std::lock_guard lock(m_);
        if (stall_msg_.empty()) stall_msg_ = msg;
        aborted_.store(true, std::memory_order_release);
    }
    bool aborted() const { return aborted_.load(std::memory_order_acquire); }
    [[noreturn]] void rethrow(ScheduleReport partial) {
        std::lock_guard lock(m_);
        if (eptr_) {
            try {
                std::rethrow_exception(eptr_);
            } catch (StreamError& e) {
                e.partial_report = std::move(partial);
                throw;
            } catch (const std::exception& e) {
                throw StreamError(std::string("stream failed: ") + e.what(),
                                  std::move(partial));
            }
        }
        throw StreamError(stall_msg_.empty() ? "stream aborted" : stall_msg_,
                          std::move(partial));
    }

private:
    std::mutex m_;
    std::string stall_msg_;
    std::exception_ptr eptr_;
    std::atomic<bool> aborted_{false};
};

void finalize_report(ScheduleReport& report, RunStats&& stats, std::uint64_t checksum) {
    report.blocks_processed = stats.blocks;
    report.deadline_misses = stats.misses;
    report.queue_overflows = stats.overflows;
    report.latencies_us = std::move(stats.latencies_us);
    report.output_checksum = checksum;

    const auto& lat = report.latencies_us;
    if (lat.empty()) return;
    double sum = 0.0, max = 0.0;
    for (double v : lat) {
        sum += v;
        max = std::max(max, v);
    }
    const double mean = sum / static_cast<double>(lat.size());
    double var = 0.0;
    for (double v : lat) var += (v - mean) * (v - mean);
    std::vector<double> sorted = lat;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(sorted.size())));
    report.latency_mean_us = mean;
    report.latency_max_us = max;
    report.latency_p95_us = sorted[rank == 0 ? 0 : rank - 1];
    report.jitter_us = std::sqrt(var / static_cast<double>(lat.size()));
}

void validate(const StreamConfig& cfg) {
    if (cfg.block_frames < 16) throw ConfigError("block_frames must be >= 16");
    if (cfg.sample_rate_hz == 0) throw ConfigError("sample rate must be positive");
    if (cfg.queue_capacity == 0) throw ConfigError("queue capacity must be >= 1");
    if (!(cfg.watchdog_s > 0.0)) throw ConfigError("watchdog must be positive");
}

}  // namespace

const char* to_string(ScheduleMode m) {
    return m == ScheduleMode::IdleTask ? "idle" : "critical";
}

const char* to_string(Pacing p) {
    return p == Pacing::RealtimeClock ? "realtime" : "afap";
}

std::optional<AudioBlock> MemorySource::next() {
    if (pos_ >= blocks_.size()) return std::nullopt;
    return blocks_[pos_++];
}

std::uint64_t fold_block_checksum(std::uint64_t h, const AudioBlock& block) {
    constexpr std::uint64_t prime = 0x100000001b3ull;
    auto fold = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= prime;
        }
    };
    fold(block.channels());
    fold(block.frames());
    for (const auto& channel : block.samples)
        for (double s : channel) {
            std::uint64_t bits;
            std::memcpy(&bits, &s, sizeof bits);
            fold(bits);
        }
    return h;
}

void ChecksumSink::write(const AudioBlock& block) {
    hash_ = fold_block_checksum(hash_, block);
    if (keep_) kept_.push_back(block);
}

ScheduleReport run_stream(EffectGraph& chain, BlockSource& source, BlockSink& sink,
                          ScheduleMode mode, const LoadProfile& load,
                          const StreamConfig& cfg) {
    validate(cfg);

    const auto watchdog = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(cfg.watchdog_s));
    const bool realtime = cfg.pacing == Pacing::RealtimeClock;

    LoadRig rig(load);
    StreamFault fault;
    RunStats stats;
    std::mutex stats_mutex;  // worker writes, main thread reads after join

    // IdleTask bounded queue
    std::deque<StreamItem> queue;
    std::mutex queue_mutex;
    std::condition_variable cv_nonempty, cv_space;
    bool done = false;

    // CriticalTask single-slot rendezvous: slot is owned by whoever holds the
    // corresponding semaphore side.
    std::optional<StreamItem> slot;
    std::binary_semaphore slot_filled{0}, slot_free{1};

    auto handle_block = [&](StreamItem&& item) {
        const AudioBlock out = process_graph(chain, item.block);
        sink.write(out);
        const double latency_s =
            std::chrono::duration<double>(Clock::now() - item.ready).count();
        std::lock_guard lock(stats_mutex);
        ++stats.blocks;
        if (latency_s > item.deadline_s || item.overflowed) ++stats.misses;
        if (item.overflowed) ++stats.overflows;
        stats.latencies_us.push_back(latency_s * 1e6);
    };

    std::thread worker;
    if (mode == ScheduleMode::IdleTask) {
        worker = std::thread([&] {
            set_thread_niceness(19);  // lowest priority, below everything else
            try {
                for (;;) {
                    std::unique_lock lock(queue_mutex);
                    cv_nonempty.wait_for(lock, std::chrono::microseconds(200), [&] {
                        return !queue.empty() || done || fault.aborted();
                    });
                    if (fault.aborted()) break;
                    if (queue.empty()) {
                        if (done) break;
                        continue;  // keep polling
                    }
                    StreamItem item = std::move(queue.front());
                    queue.pop_front();
                    lock.unlock();
                    cv_space.notify_one();
                    // Step aside whenever anything else is runnable.
                    if (rig.any_runnable()) std::this_thread::yield();
                    handle_block(std::move(item));
                }
            } catch (...) {
                fault.capture();
                cv_space.notify_all();
            }
        });
    } else {
        worker = std::thread([&] {
            set_thread_niceness(-10);  // elevated where permitted
            try {
                for (;;) {
                    if (!slot_filled.try_acquire_for(std::chrono::milliseconds(100))) {
                        if (fault.aborted()) break;
                        continue;
                    }
                    if (!slot.has_value()) break;  // end-of-stream signal
                    StreamItem item = std::move(*slot);
                    slot.reset();
                    handle_block(std::move(item));
                    rig.lower_ceiling();
                    slot_free.release();
                }
            } catch (...) {
                fault.capture();
                rig.lower_ceiling();
                slot_free.release();
            }
        });
    }

    // Producer runs on the calling thread, paced by the stream clock.
    TimePoint next_scheduled = Clock::now() + std::chrono::milliseconds(1);
    std::exception_ptr producer_error;
    try {
        while (!fault.aborted()) {
            std::optional<AudioBlock> block = source.next();
            if (!block) break;

            StreamItem item;
            item.deadline_s = static_cast<double>(block->frames()) / cfg.sample_rate_hz;
            item.block = std::move(*block);

            if (realtime) {
                std::this_thread::sleep_until(next_scheduled);
                item.ready = next_scheduled;
                next_scheduled += std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(item.deadline_s));
            }

            if (mode == ScheduleMode::IdleTask) {
                std::unique_lock lock(queue_mutex);
                // On the realtime clock a full queue is an overflow the block
                // pays for; the producer still waits so nothing is dropped.
                if (realtime && queue.size() >= cfg.queue_capacity)
                    item.overflowed = true;
                if (!cv_space.wait_for(lock, watchdog, [&] {
                        return queue.size() < cfg.queue_capacity || fault.aborted();
                    })) {
                    fault.mark_stall("idle-task queue stalled past the watchdog");
                    break;
                }
                if (fault.aborted()) break;
                if (!realtime) item.ready = Clock::now();
                queue.push_back(std::move(item));
                lock.unlock();
                cv_nonempty.notify_one();
            } else {
                if (!slot_free.try_acquire_for(watchdog)) {
                    fault.mark_stall("critical-task handoff stalled past the watchdog");
                    break;
                }
                if (fault.aborted()) break;
                if (!realtime) item.ready = Clock::now();
                rig.raise_ceiling();  // loads pause until the block is written
                slot = std::move(item);
                slot_filled.release();
            }
        }
    } catch (...) {
        producer_error = std::current_exception();
        fault.capture();
    }

    // Signal end of stream and wait for the worker to drain.
    if (mode == ScheduleMode::IdleTask) {
        {
            std::lock_guard lock(queue_mutex);
            done = true;
        }
        cv_nonempty.notify_all();
    } else {
        if (!slot_free.try_acquire_for(watchdog))
            fault.mark_stall("critical-task worker failed to drain");
        else
            slot.reset();
        // Clear any pending count before signaling so the release stays legal.
        slot_filled.try_acquire();
        slot_filled.release();
    }
    worker.join();
    rig.stop();

    ScheduleReport report;
    finalize_report(report, std::move(stats), sink.checksum());
    if (producer_error || fault.aborted()) fault.rethrow(std::move(report));
    return report;
}

ComparisonReport compare_modes(EffectGraph& chain, const std::vector<AudioBlock>& input,
                               const LoadProfile& load, const StreamConfig& cfg) {
    ComparisonReport cmp;

    chain.reset();
    MemorySource idle_source(input);
    ChecksumSink idle_sink;
    cmp.idle = run_stream(chain, idle_source, idle_sink, ScheduleMode::IdleTask, load, cfg);

    chain.reset();
    MemorySource critical_source(input);
    ChecksumSink critical_sink;
    cmp.critical = run_stream(chain, critical_source, critical_sink,
                              ScheduleMode::CriticalTask, load, cfg);

    cmp.critical_no_worse = cmp.critical.deadline_misses <= cmp.idle.deadline_misses;
    return cmp;
}

}  // namespace fx
