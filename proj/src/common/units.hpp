// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// dB / linear conversions. Powers use 10*log10, amplitudes 20*log10.
// dBm <-> mW for absolute powers; everything else is a dimensionless ratio.

#include <cmath>
#include <limits>

namespace dmimo
{

inline constexpr double speed_of_light = 299792458.0; // m/s

// Finite stand-in for -inf in serialized tables (zero channel, absent AP).
inline constexpr double power_floor_dbm = -400.0;

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double amplitude_to_db(double amplitude) { return 20.0 * std::log10(amplitude); }

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double wavelength(double frequency_hz) { return speed_of_light / frequency_hz; }

// Replaces -inf / NaN with the serialization floor.
inline double floor_dbm(double dbm)
{
    if (!std::isfinite(dbm) || dbm < power_floor_dbm)
        return power_floor_dbm;
    return dbm;
}

} // namespace dmimo
