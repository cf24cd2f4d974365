#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "volterra/kernel.hpp"
#include "volterra/morphism.hpp"
#include "volterra/tfd.hpp"

namespace volterra {

// Unreadable file or malformed content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Series files (.vk): JSON manifest with version, memory, and one entry per
// index holding its order and row-major [re, im] pairs. Doubles are written
// in shortest round-trip form, so read(write(s)) reproduces s bit for bit.
std::string series_to_text(const VolterraSeries& s);
VolterraSeries series_from_text(const std::string& text);
void write_series(const VolterraSeries& s, const std::string& path);
VolterraSeries read_series(const std::string& path);

// Morphism files (.vm).
std::string morphism_to_text(const Morphism& m);
Morphism morphism_from_text(const std::string& text);
void write_morphism(const Morphism& m, const std::string& path);
Morphism read_morphism(const std::string& path);

// Signal CSV: one "re,im" row per sample; a lone value is a real sample.
SampledSignal read_signal_csv(std::istream& in);
SampledSignal read_signal_csv(const std::string& path);
void write_signal_csv(const SampledSignal& s, std::ostream& out);
void write_signal_csv(const SampledSignal& s, const std::string& path);

// Grid CSV: one row per time bin holding the real parts.
void write_grid_csv(const TFDGrid& g, std::ostream& out);
void write_grid_csv(const TFDGrid& g, const std::string& path);
// Binary P5, 8-bit, rows = time, magnitude scaled so the maximum maps to 255.
void write_pgm(const TFDGrid& g, const std::string& path);

}  // namespace volterra
