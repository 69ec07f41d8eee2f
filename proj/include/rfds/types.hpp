#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfds {

using cplx = std::complex<double>;

/// Propagation speed used for all range/Doppler conversions (radar convention).
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = 3.14159265358979323846;

/// Floor added inside power-to-dB conversions so silence maps to a finite level.
inline constexpr double kPowerFloor = 1e-30;

inline double power_db(double linear_power) {
    return 10.0 * std::log10(linear_power + kPowerFloor);
}

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

/// Wrap an angle to (-pi, pi].
double wrap_phase(double rad);

enum class PresenceState : std::uint8_t {
    Absent = 0,
    Approaching = 1,
    Leaving = 2,
    Present = 3,
};

enum class SensingMode : std::uint8_t {
    Idle = 0,
    Detection = 1,
};

std::string to_string(PresenceState s);
std::string to_string(SensingMode m);
PresenceState presence_state_from_string(const std::string& s);

/// True for the two transitional states (the combined approach/leave class).
inline bool is_transitional(PresenceState s) {
    return s == PresenceState::Approaching || s == PresenceState::Leaving;
}

/// Error carrying a process exit category: usage errors (bad invocation,
/// malformed options) exit 1, data errors (bad file contents) exit 2.
class Error : public std::runtime_error {
  public:
    enum class Kind { Usage, Data };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

    static Error usage(const std::string& what) { return Error(Kind::Usage, what); }
    static Error data(const std::string& what) { return Error(Kind::Data, what); }

  private:
    Kind kind_;
};

/// One CSI snapshot: complex channel gain per subcarrier at a given time.
struct CsiFrame {
    double timestamp_s = 0.0;
    std::vector<cplx> samples;
};

/// Ground-truth annotation attached to synthetic captures.
struct Label {
    double time_s = 0.0;
    double range_m = 0.0;
    double velocity_mps = 0.0;
    PresenceState state = PresenceState::Absent;
};

}  // namespace rfds
