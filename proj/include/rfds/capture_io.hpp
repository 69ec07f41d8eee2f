#pragma once

#include <string>

#include "rfds/config.hpp"

namespace rfds {

/// Binary capture container. Layout, all little-endian:
///   magic "RFDS", u16 version,
///   u32 num_subcarriers, f64 subcarrier_spacing_hz, f64 carrier_frequency_hz,
///   f64 frame_interval_s, u64 frame_count, u64 label_count,
///   frames as interleaved float32 (re, im) pairs (frame-major),
///   labels as (f64 time_s, f64 range_m, f64 velocity_mps, u8 state).
/// Frame timestamps are implicit: frame m sits at m * frame_interval_s.
void write_capture(const CsiCapture& capture, const std::string& path);

/// Read a capture. Signal-geometry fields come from the file header; all
/// processing parameters come from `processing_base`.
CsiCapture read_capture(const std::string& path, const SensingConfig& processing_base);

}  // namespace rfds
