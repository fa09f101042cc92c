#ifndef MPROX_SIM_TIME_HPP
#define MPROX_SIM_TIME_HPP

#include <cstdint>

namespace mprox {

// Virtual time in integer microseconds since run start.
using SimTime = std::int64_t;

constexpr SimTime operator""_us(unsigned long long v) { return static_cast<SimTime>(v); }
constexpr SimTime operator""_ms(unsigned long long v) { return static_cast<SimTime>(v) * 1000; }
constexpr SimTime operator""_s(unsigned long long v) { return static_cast<SimTime>(v) * 1'000'000; }

constexpr double to_seconds(SimTime t) { return static_cast<double>(t) * 1e-6; }

} // namespace mprox

#endif
