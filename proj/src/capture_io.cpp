#include "rfds/capture_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace rfds {

namespace {

constexpr char kMagic[4] = {'R', 'F', 'D', 'S'};
constexpr std::uint16_t kVersion = 1;

// The toolchain targets little-endian hosts; serialize via memcpy.
template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
  public:
    Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    template <typename T>
    T get(const char* field) {
        if (pos_ + sizeof(T) > data_.size())
            throw Error::data(path_ + ": truncated while reading " + field);
        T v;
        std::memcpy(&v, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    void expect_magic() {
        if (data_.size() < 4 || std::memcmp(data_.data(), kMagic, 4) != 0)
            throw Error::data(path_ + ": bad magic (not a capture file)");
        pos_ = 4;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

  private:
    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_capture(const CsiCapture& capture, const std::string& path) {
    const SensingConfig& cfg = capture.config;
    std::string out;
    out.reserve(64 + capture.frames.size() * cfg.num_subcarriers * 8 +
                capture.labels.size() * 25);
    out.append(kMagic, 4);
    put<std::uint16_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.num_subcarriers));
    put<double>(out, cfg.subcarrier_spacing_hz);
    put<double>(out, cfg.carrier_frequency_hz);
    put<double>(out, cfg.frame_interval_s);
    put<std::uint64_t>(out, capture.frames.size());
    put<std::uint64_t>(out, capture.labels.size());
    for (const auto& frame : capture.frames) {
        for (const cplx& s : frame.samples) {
            put<float>(out, static_cast<float>(s.real()));
            put<float>(out, static_cast<float>(s.imag()));
        }
    }
    for (const Label& l : capture.labels) {
        put<double>(out, l.time_s);
        put<double>(out, l.range_m);
        put<double>(out, l.velocity_mps);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(l.state));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error::data("cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error::data("write failed: " + path);
}

CsiCapture read_capture(const std::string& path, const SensingConfig& processing_base) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error::data("cannot open capture file: " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    Reader r(data, path);
    r.expect_magic();
    const auto version = r.get<std::uint16_t>("version");
    if (version != kVersion)
        throw Error::data(path + ": unsupported capture version " + std::to_string(version));

    CsiCapture cap;
    cap.config = processing_base;
    cap.config.num_subcarriers = r.get<std::uint32_t>("num_subcarriers");
    cap.config.subcarrier_spacing_hz = r.get<double>("subcarrier_spacing_hz");
    cap.config.carrier_frequency_hz = r.get<double>("carrier_frequency_hz");
    cap.config.frame_interval_s = r.get<double>("frame_interval_s");
    const auto frame_count = r.get<std::uint64_t>("frame_count");
    const auto label_count = r.get<std::uint64_t>("label_count");

    const std::size_t n = cap.config.num_subcarriers;
    if (n == 0) throw Error::data(path + ": header field num_subcarriers is zero");
    if (!(cap.config.frame_interval_s > 0.0))
        throw Error::data(path + ": header field frame_interval_s must be positive");
    const std::size_t need = frame_count * n * 8 + label_count * 25;
    if (r.remaining() < need)
        throw Error::data(path + ": payload shorter than header frame_count/label_count imply");

    cap.frames.resize(frame_count);
    for (std::uint64_t m = 0; m < frame_count; ++m) {
        CsiFrame& frame = cap.frames[m];
        frame.timestamp_s = static_cast<double>(m) * cap.config.frame_interval_s;
        frame.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const float re = r.get<float>("sample");
            const float im = r.get<float>("sample");
            frame.samples[i] = cplx(re, im);
        }
    }
    cap.labels.resize(label_count);
    for (std::uint64_t i = 0; i < label_count; ++i) {
        Label& l = cap.labels[i];
        l.time_s = r.get<double>("label time");
        l.range_m = r.get<double>("label range");
        l.velocity_mps = r.get<double>("label velocity");
        const auto s = r.get<std::uint8_t>("label state");
        if (s > 3) throw Error::data(path + ": label state out of range");
        l.state = static_cast<PresenceState>(s);
    }
    return cap;
}

}  // namespace rfds
