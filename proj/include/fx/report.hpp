#pragma once

#include <string>

#include "fx/audio_io.hpp"
#include "fx/scheduler.hpp"

namespace fx {

// Human-readable analysis of every effect in a chain: transfer-function
// coefficients, pole table with magnitudes, stability classification, and
// for stress generators the residue decomposition with the recursion
// cross-check.
std::string chain_analysis_report(const ChainConfig& cfg);

// One-line machine-readable schedule record: `record type=schedule key=value ...`.
std::string schedule_record(const ScheduleReport& r, ScheduleMode mode, int rep);

}  // namespace fx
