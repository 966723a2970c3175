#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace newslens {

// File could not be opened or read.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File opened fine but its contents violate the documented format.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// Unlike std::uniform_real_distribution this is identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// RFC-4180 quoting for a single CSV field.
inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace newslens
