#include "rfds/config_io.hpp"

#include <fstream>
#include <sstream>

#include "rfds/kv.hpp"

namespace rfds {

namespace {

void apply_entry(SensingConfig& cfg, const kv::Entry& e, const std::string& source) {
    const std::string& k = e.key;
    if (k == "num_subcarriers") {
        cfg.num_subcarriers = kv::to_size(e, source);
    } else if (k == "subcarrier_spacing_hz") {
        cfg.subcarrier_spacing_hz = kv::to_double(e, source);
    } else if (k == "carrier_frequency_hz") {
        cfg.carrier_frequency_hz = kv::to_double(e, source);
    } else if (k == "frame_interval_s") {
        cfg.frame_interval_s = kv::to_double(e, source);
    } else if (k == "doppler_frames") {
        cfg.doppler_frames = kv::to_size(e, source);
    } else if (k == "doppler_hop_frames") {
        cfg.doppler_hop_frames = kv::to_size(e, source);
    } else if (k == "subcarrier_window") {
        cfg.subcarrier_window = subcarrier_window_from_string(e.value);
    } else if (k == "num_range_gates") {
        // Redundant with gate_ranges_m; accepted and checked after all entries.
        const std::size_t n = kv::to_size(e, source);
        if (n == 0) throw Error::data(source + ": num_range_gates must be >= 1");
    } else if (k == "gate_ranges_m") {
        cfg.gate_ranges_m = kv::to_double_list(e, source);
    } else if (k == "fir_taps") {
        cfg.fir_taps = kv::to_size(e, source);
    } else if (k == "fir_cutoff") {
        cfg.fir_cutoff = kv::to_double(e, source);
    } else if (k == "snr_window") {
        cfg.snr_window = kv::to_size(e, source);
    } else if (k == "detection_window") {
        cfg.detection_window = kv::to_size(e, source);
    } else if (k == "snr_threshold_db") {
        cfg.snr_threshold_db = kv::to_double(e, source);
    } else if (k == "majority_window") {
        cfg.majority_window = kv::to_size(e, source);
    } else if (k == "clip_margin_db") {
        cfg.clip_margin_db = kv::to_double(e, source);
    } else if (k == "phase_history") {
        cfg.phase_history = kv::to_size(e, source);
    } else if (k == "phase_quantum_rad") {
        cfg.phase_quantum_rad = kv::to_double(e, source);
    } else if (k == "upsample_factor") {
        cfg.upsample_factor = kv::to_size(e, source);
    } else if (k == "sync_delay_freeze") {
        cfg.sync_delay_freeze = kv::to_bool(e, source);
    } else if (k == "zone_near_max_m") {
        cfg.zone_near_max_m = kv::to_double(e, source);
    } else if (k == "zone_approach_max_m") {
        cfg.zone_approach_max_m = kv::to_double(e, source);
    } else if (k == "idle_to_detection_hits") {
        cfg.idle_to_detection_hits = kv::to_size(e, source);
    } else if (k == "detection_to_idle_misses") {
        cfg.detection_to_idle_misses = kv::to_size(e, source);
    } else if (k == "collapse_transitional") {
        cfg.collapse_transitional = kv::to_bool(e, source);
    } else {
        throw Error::data(source + ":" + std::to_string(e.line) + ": unknown config key '" +
                          k + "'");
    }
}

}  // namespace

SensingConfig apply_config_text(const SensingConfig& base, const std::string& text,
                                const std::string& source_name) {
    kv::Doc doc = kv::parse(text, source_name);
    if (!doc.blocks.empty())
        throw Error::data(source_name + ":" + std::to_string(doc.blocks.front().line) +
                          ": config files do not contain blocks");
    SensingConfig cfg = base;
    for (const auto& e : doc.entries) apply_entry(cfg, e, source_name);
    if (const kv::Entry* n = doc.find("num_range_gates")) {
        if (kv::to_size(*n, source_name) != cfg.gate_ranges_m.size())
            throw Error::data(source_name + ":" + std::to_string(n->line) +
                              ": num_range_gates disagrees with gate_ranges_m length");
    }
    cfg.validate();
    return cfg;
}

SensingConfig load_config_file(const SensingConfig& base, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::data("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return apply_config_text(base, buf.str(), path);
}

SensingConfig apply_override(const SensingConfig& base, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw Error::usage("override must look like key=value, got '" + spec + "'");
    const std::string text = spec.substr(0, eq) + " = " + spec.substr(eq + 1);
    return apply_config_text(base, text, "<override>");
}

std::string serialize_config(const SensingConfig& cfg) {
    std::ostringstream out;
    auto num = [&](const std::string& k, double v) { out << kv::format_entry(k, kv::format_double(v)); };
    auto integer = [&](const std::string& k, std::size_t v) { out << kv::format_entry(k, std::to_string(v)); };
    auto boolean = [&](const std::string& k, bool v) { out << kv::format_entry(k, v ? "true" : "false"); };

    integer("num_subcarriers", cfg.num_subcarriers);
    num("subcarrier_spacing_hz", cfg.subcarrier_spacing_hz);
    num("carrier_frequency_hz", cfg.carrier_frequency_hz);
    num("frame_interval_s", cfg.frame_interval_s);
    integer("doppler_frames", cfg.doppler_frames);
    integer("doppler_hop_frames", cfg.doppler_hop_frames);
    out << kv::format_entry("subcarrier_window", to_string(cfg.subcarrier_window));
    integer("num_range_gates", cfg.gate_ranges_m.size());
    {
        std::string list;
        for (std::size_t i = 0; i < cfg.gate_ranges_m.size(); ++i) {
            if (i) list += ", ";
            list += kv::format_double(cfg.gate_ranges_m[i]);
        }
        out << kv::format_entry("gate_ranges_m", list);
    }
    integer("fir_taps", cfg.fir_taps);
    num("fir_cutoff", cfg.fir_cutoff);
    integer("snr_window", cfg.snr_window);
    integer("detection_window", cfg.detection_window);
    num("snr_threshold_db", cfg.snr_threshold_db);
    integer("majority_window", cfg.majority_window);
    num("clip_margin_db", cfg.clip_margin_db);
    integer("phase_history", cfg.phase_history);
    num("phase_quantum_rad", cfg.phase_quantum_rad);
    integer("upsample_factor", cfg.upsample_factor);
    boolean("sync_delay_freeze", cfg.sync_delay_freeze);
    num("zone_near_max_m", cfg.zone_near_max_m);
    num("zone_approach_max_m", cfg.zone_approach_max_m);
    integer("idle_to_detection_hits", cfg.idle_to_detection_hits);
    integer("detection_to_idle_misses", cfg.detection_to_idle_misses);
    boolean("collapse_transitional", cfg.collapse_transitional);
    return out.str();
}

}  // namespace rfds
