// Command-line front end: scene synthesis, capture processing, conventional
// vs gate-pipeline comparison, cost benchmarks and third-party imports.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rfds/baseline.hpp"
#include "rfds/capture_io.hpp"
#include "rfds/config_io.hpp"
#include "rfds/hpd.hpp"
#include "rfds/kv.hpp"
#include "rfds/report.hpp"
#include "rfds/synth.hpp"

namespace {

using namespace rfds;

struct ConfigArgs {
    std::string preset = "detection";
    std::string config_file;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--preset", args.preset, "Parameter preset: idle or detection")
        ->check(CLI::IsMember({"idle", "detection"}));
    cmd->add_option("--config", args.config_file, "Config file applied over the preset");
    cmd->add_option("--override", args.overrides, "key=value config override (repeatable)");
}

SensingConfig resolve_config(const ConfigArgs& args) {
    SensingConfig cfg = preset_by_name(args.preset);
    if (const char* env = std::getenv("RFDS_CONFIG"); env && *env)
        cfg = load_config_file(cfg, env);
    if (!args.config_file.empty()) cfg = load_config_file(cfg, args.config_file);
    for (const auto& o : args.overrides) cfg = apply_override(cfg, o);
    cfg.validate();
    return cfg;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error::data("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error::data("write failed: " + path);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_synth(const ConfigArgs& cargs, const std::string& scene_path, double duration,
              std::uint64_t seed, const std::string& out_path) {
    const SensingConfig cfg = resolve_config(cargs);
    const SceneSpec scene = load_scene_file(scene_path);
    const CsiCapture cap = generate_capture(scene, cfg, duration, seed);
    write_capture(cap, out_path);
    std::cout << "wrote " << out_path << ": " << cap.frames.size() << " frames, "
              << scene.targets.size() << " targets, noise_power "
              << kv::format_double(scene.noise_power) << ", labels " << cap.labels.size()
              << "\n";
    return 0;
}

int cmd_process(const ConfigArgs& cargs, const std::string& capture_path,
                const std::string& timeline_path, const std::string& report_path,
                const std::string& clutter_name, bool no_sync,
                const std::string& tdm_dir) {
    const auto start = std::chrono::steady_clock::now();
    const SensingConfig base = resolve_config(cargs);
    CsiCapture cap = read_capture(capture_path, base);
    if (std::abs(cap.config.frame_interval_s - base.frame_interval_s) >
        0.01 * base.frame_interval_s) {
        std::cerr << "warning: capture frame interval "
                  << kv::format_double(cap.config.frame_interval_s)
                  << " s differs from the configured "
                  << kv::format_double(base.frame_interval_s)
                  << " s; proceeding with the capture's rate\n";
    }
    const SensingConfig detection_cfg = cap.config;
    const SensingConfig idle_cfg = to_idle_rate(detection_cfg);

    PipelineOptions opts;
    opts.clutter = clutter_filter_from_string(clutter_name);
    opts.sync = !no_sync;
    const StreamResult result = process_stream(cap, detection_cfg, idle_cfg, opts);

    if (!timeline_path.empty())
        write_text(timeline_path, timeline_csv(result.timeline,
                                               detection_cfg.collapse_transitional));
    if (!tdm_dir.empty()) {
        std::filesystem::create_directories(tdm_dir);
        for (const auto& map : result.detection_maps) {
            write_text(tdm_dir + "/tdm_gate" + std::to_string(map.gate_index) + ".csv",
                       time_doppler_csv(map));
        }
    }

    RunReport report;
    report.frames = cap.frames.size();
    report.timeline_rows = result.timeline.size();
    report.mode_switches = result.mode_switches;
    report.rfds_ops = result.ops;
    report.rdm_ops_per_block = count_ops_rdm(detection_cfg);
    report.rdm_ops_continuous = report.rdm_ops_per_block *
                                static_cast<std::uint64_t>(cap.frames.size());
    report.has_labels = !cap.labels.empty();
    if (report.has_labels) report.eval = evaluate_timeline(result.timeline, cap.labels);
    report.runtime_s = seconds_since(start);

    const std::string kv_text = report_kv(report);
    if (!report_path.empty()) write_text(report_path, kv_text);
    std::cout << kv_text;
    return 0;
}

int cmd_compare(const ConfigArgs& cargs, const std::string& capture_path,
                const std::string& out_dir, const std::string& clutter_name, bool no_sync) {
    const SensingConfig base = resolve_config(cargs);
    CsiCapture cap = read_capture(capture_path, base);
    const SensingConfig cfg = cap.config;
    const ClutterFilter clutter = clutter_filter_from_string(clutter_name);

    std::filesystem::create_directories(out_dir);

    // One representative full map from the middle of the capture.
    if (cap.frames.size() >= cfg.doppler_frames) {
        const std::size_t mid_start = (cap.frames.size() - cfg.doppler_frames) / 2;
        std::vector<CsiFrame> block(cap.frames.begin() + mid_start,
                                    cap.frames.begin() + mid_start + cfg.doppler_frames);
        const RangeDopplerMap map = compute_rdm(block, cfg, /*remove_dc=*/true);
        write_text(out_dir + "/rdm_mid.csv", rdm_csv(map));
    }

    PipelineOptions opts;
    opts.clutter = clutter;
    opts.sync = !no_sync;
    RfdsPipeline pipeline(cfg, opts);
    Detector detector(cfg);
    RdmTracker tracker(cfg, clutter, !no_sync);

    std::string gate_track = "time_s,range_m,velocity_mps,snr_db\n";
    std::string rdm_track = "time_s,range_m,velocity_mps,power_db\n";
    char buf[160];
    double gate_sq = 0.0, rdm_sq = 0.0;
    std::size_t gate_n = 0, rdm_n = 0;

    auto truth_range = [&](double t) -> double {
        if (cap.labels.empty()) return -1.0;
        const Label* best = &cap.labels.front();
        for (const auto& l : cap.labels)
            if (std::abs(l.time_s - t) < std::abs(best->time_s - t)) best = &l;
        return best->range_m;
    };

    for (const auto& frame : cap.frames) {
        for (const auto& w : pipeline.push_frame(frame)) {
            const GateDetection det = detector.observe(w);
            if (!det.bootstrap && det.snr_db > cfg.snr_threshold_db) {
                std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f\n", det.time_s,
                              det.range_m, det.velocity_mps, det.snr_db);
                gate_track += buf;
                if (const double r = truth_range(det.time_s); r >= 0.0) {
                    gate_sq += (det.range_m - r) * (det.range_m - r);
                    ++gate_n;
                }
            }
        }
        if (auto p = tracker.push_frame(frame)) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f\n", p->time_s, p->range_m,
                          p->velocity_mps, p->power_db);
            rdm_track += buf;
            if (const double r = truth_range(p->time_s); r >= 0.0) {
                rdm_sq += (p->range_m - r) * (p->range_m - r);
                ++rdm_n;
            }
        }
    }

    write_text(out_dir + "/rfds_track.csv", gate_track);
    write_text(out_dir + "/rdm_track.csv", rdm_track);
    if (!cap.labels.empty()) {
        std::string truth = "time_s,range_m,velocity_mps\n";
        for (const auto& l : cap.labels) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", l.time_s, l.range_m,
                          l.velocity_mps);
            truth += buf;
        }
        write_text(out_dir + "/truth_track.csv", truth);
    }

    if (gate_n > 0)
        std::cout << "rfds_rms_range_error_m = "
                  << kv::format_double(std::sqrt(gate_sq / static_cast<double>(gate_n)))
                  << "\n";
    else
        std::cout << "rfds_rms_range_error_m = n/a  # low SNR, no confident detections\n";
    if (rdm_n > 0)
        std::cout << "rdm_rms_range_error_m = "
                  << kv::format_double(std::sqrt(rdm_sq / static_cast<double>(rdm_n)))
                  << "\n";
    else
        std::cout << "rdm_rms_range_error_m = n/a\n";
    return 0;
}

int cmd_bench(const std::string& sweep_path, const std::string& out_path,
              std::size_t frames) {
    std::ifstream in(sweep_path);
    if (!in) throw Error::data("cannot open sweep file: " + sweep_path);

    std::string csv =
        "num_subcarriers,doppler_frames,range_gates,fir_taps,frames,"
        "rfds_multiplies,rdm_multiplies_continuous,ratio,rfds_ms,rdm_ms\n";
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t n = 0, m = 0, gates = 0, taps = 0;
        if (std::sscanf(line.c_str(), "%zu , %zu , %zu , %zu", &n, &m, &gates, &taps) != 4)
            throw Error::data(sweep_path + ":" + std::to_string(line_no) +
                              ": expected 'N,M,R_g,M_fir'");

        SensingConfig cfg = detection_preset();
        cfg.num_subcarriers = n;
        cfg.subcarrier_spacing_hz = 160e6 / static_cast<double>(n);
        cfg.doppler_frames = m;
        cfg.doppler_hop_frames = std::max<std::size_t>(1, m / 4);
        cfg.fir_taps = taps;
        cfg.gate_ranges_m.clear();
        const double pitch = range_resolution(cfg);
        for (std::size_t g = 0; g < gates; ++g)
            cfg.gate_ranges_m.push_back(pitch * static_cast<double>(g));
        cfg.validate();

        SceneSpec scene;
        scene.noise_power = 1.0;
        const double duration =
            static_cast<double>(frames) * cfg.frame_interval_s + 1e-9;
        const CsiCapture cap = generate_capture(scene, cfg, duration, 1234);

        PipelineOptions opts;
        opts.sync = false;
        RfdsPipeline pipeline(cfg, opts);
        auto t0 = std::chrono::steady_clock::now();
        for (const auto& f : cap.frames) pipeline.push_frame(f);
        const double rfds_ms = seconds_since(t0) * 1e3;

        RdmTracker tracker(cfg, ClutterFilter::None, false);
        t0 = std::chrono::steady_clock::now();
        for (const auto& f : cap.frames) tracker.push_frame(f);
        const double rdm_ms = seconds_since(t0) * 1e3;

        const std::uint64_t rfds_ops = pipeline.ops().total();
        const std::uint64_t rdm_ops =
            count_ops_rdm(cfg) * static_cast<std::uint64_t>(cap.frames.size());
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%zu,%zu,%llu,%llu,%.3f,%.3f,%.3f\n", n,
                      m, gates, taps, cap.frames.size(),
                      static_cast<unsigned long long>(rfds_ops),
                      static_cast<unsigned long long>(rdm_ops),
                      static_cast<double>(rdm_ops) / static_cast<double>(rfds_ops), rfds_ms,
                      rdm_ms);
        csv += buf;
    }
    if (!out_path.empty()) write_text(out_path, csv);
    std::cout << csv;
    return 0;
}

int cmd_convert(const ConfigArgs& cargs, const std::string& input_path,
                const std::string& mapping_path, const std::string& out_path) {
    const kv::Doc mapping = kv::parse_file(mapping_path);
    auto get = [&](const std::string& key) -> const kv::Entry& {
        const kv::Entry* e = mapping.find(key);
        if (!e) throw Error::data(mapping_path + ": missing required key '" + key + "'");
        return *e;
    };
    if (get("format").value != "csv")
        throw Error::data(mapping_path + ": only format = csv is supported");
    const std::size_t num_subcarriers = kv::to_size(get("num_subcarriers"), mapping_path);
    const long long time_column =
        mapping.find("time_column") ? kv::to_int(*mapping.find("time_column"), mapping_path)
                                    : -1;
    const std::size_t first_value_column =
        kv::to_size(get("first_value_column"), mapping_path);
    const std::size_t skip_lines =
        mapping.find("skip_lines") ? kv::to_size(*mapping.find("skip_lines"), mapping_path)
                                   : 0;
    std::string value_layout = "re_im";
    if (mapping.find("value_layout")) value_layout = mapping.find("value_layout")->value;
    if (value_layout != "re_im" && value_layout != "im_re")
        throw Error::data(mapping_path + ": value_layout must be re_im or im_re");
    char delimiter = ',';
    if (mapping.find("delimiter") && !mapping.find("delimiter")->value.empty())
        delimiter = mapping.find("delimiter")->value[0];

    SensingConfig cfg = resolve_config(cargs);
    cfg.num_subcarriers = num_subcarriers;
    if (mapping.find("subcarrier_spacing_hz"))
        cfg.subcarrier_spacing_hz =
            kv::to_double(*mapping.find("subcarrier_spacing_hz"), mapping_path);
    if (mapping.find("carrier_frequency_hz"))
        cfg.carrier_frequency_hz =
            kv::to_double(*mapping.find("carrier_frequency_hz"), mapping_path);
    if (mapping.find("frame_interval_s"))
        cfg.frame_interval_s = kv::to_double(*mapping.find("frame_interval_s"), mapping_path);

    std::ifstream in(input_path);
    if (!in) throw Error::data("cannot open input file: " + input_path);
    CsiCapture cap;
    cap.config = cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no <= skip_lines) continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, delimiter)) fields.push_back(field);
        const std::size_t needed = first_value_column + 2 * num_subcarriers;
        if (fields.size() < needed)
            throw Error::data(input_path + ":" + std::to_string(line_no) + ": expected >= " +
                              std::to_string(needed) + " columns, got " +
                              std::to_string(fields.size()));
        CsiFrame frame;
        frame.timestamp_s =
            static_cast<double>(cap.frames.size()) * cfg.frame_interval_s;
        (void)time_column;  // source timestamps are implied by the frame order
        frame.samples.resize(num_subcarriers);
        for (std::size_t i = 0; i < num_subcarriers; ++i) {
            const double a = std::strtod(fields[first_value_column + 2 * i].c_str(), nullptr);
            const double b =
                std::strtod(fields[first_value_column + 2 * i + 1].c_str(), nullptr);
            frame.samples[i] = (value_layout == "re_im") ? cplx(a, b) : cplx(b, a);
        }
        cap.frames.push_back(std::move(frame));
    }
    if (cap.frames.empty()) throw Error::data(input_path + ": no data rows found");
    write_capture(cap, out_path);
    std::cout << "wrote " << out_path << ": " << cap.frames.size() << " frames, "
              << num_subcarriers << " subcarriers\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wi-Fi CSI presence sensing: range-gated Doppler processing toolkit"};
    app.require_subcommand(1);

    ConfigArgs synth_cfg, process_cfg, compare_cfg, convert_cfg;

    auto* synth = app.add_subcommand("synth", "Render a scene file into a capture");
    std::string scene_path, synth_out;
    double duration = 10.0;
    std::uint64_t seed = 1;
    synth->add_option("--scene", scene_path, "Scene file")->required();
    synth->add_option("--duration", duration, "Capture length in seconds")->required();
    synth->add_option("--seed", seed, "Noise/impairment seed");
    synth->add_option("--out", synth_out, "Output capture path")->required();
    add_config_options(synth, synth_cfg);

    auto* process = app.add_subcommand("process", "Run the presence pipeline on a capture");
    std::string capture_path, timeline_path, report_path, tdm_dir, clutter_name = "mti";
    bool no_sync = false;
    process->add_option("--capture", capture_path, "Capture file")->required();
    process->add_option("--timeline", timeline_path, "Timeline CSV output");
    process->add_option("--report", report_path, "Machine-readable report output");
    process->add_option("--export-tdm", tdm_dir, "Directory for per-gate time-Doppler CSVs");
    process->add_option("--clutter", clutter_name, "Clutter filter: mti, dc or none");
    process->add_flag("--no-sync", no_sync, "Skip delay/phase synchronization");
    add_config_options(process, process_cfg);

    auto* compare = app.add_subcommand(
        "compare", "Write gate-pipeline and conventional-map tracks side by side");
    std::string cmp_capture, out_dir, cmp_clutter = "mti";
    bool cmp_no_sync = false;
    compare->add_option("--capture", cmp_capture, "Capture file")->required();
    compare->add_option("--out-dir", out_dir, "Output directory")->required();
    compare->add_option("--clutter", cmp_clutter, "Clutter filter: mti, dc or none");
    compare->add_flag("--no-sync", cmp_no_sync, "Skip synchronization");
    add_config_options(compare, compare_cfg);

    auto* bench = app.add_subcommand("bench", "Cost table over (N, M, R_g, M_fir) tuples");
    std::string sweep_path, bench_out;
    std::size_t bench_frames = 200;
    bench->add_option("--sweep", sweep_path, "Sweep file: lines of N,M,R_g,M_fir")
        ->required();
    bench->add_option("--out", bench_out, "Output CSV path");
    bench->add_option("--frames", bench_frames, "Frames per tuple");

    auto* convert = app.add_subcommand("convert", "Import a third-party CSI dump");
    std::string conv_input, conv_mapping, conv_out;
    convert->add_option("--input", conv_input, "Input text dump")->required();
    convert->add_option("--mapping", conv_mapping, "Column mapping file")->required();
    convert->add_option("--out", conv_out, "Output capture path")->required();
    add_config_options(convert, convert_cfg);

    try {
        app.parse(argc, argv);
        if (synth->parsed())
            return cmd_synth(synth_cfg, scene_path, duration, seed, synth_out);
        if (process->parsed())
            return cmd_process(process_cfg, capture_path, timeline_path, report_path,
                               clutter_name, no_sync, tdm_dir);
        if (compare->parsed())
            return cmd_compare(compare_cfg, cmp_capture, out_dir, cmp_clutter, cmp_no_sync);
        if (bench->parsed()) return cmd_bench(sweep_path, bench_out, bench_frames);
        if (convert->parsed())
            return cmd_convert(convert_cfg, conv_input, conv_mapping, conv_out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Error::Kind::Usage ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
