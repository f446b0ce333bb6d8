// File formats: grid functions (f64le + JSON sidecar), run-length masks.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "flagwave/lattice.hpp"
#include "json.hpp"

namespace flagwave {

// Writes <base>.f64 and <base>.json. Extra keys are merged into the sidecar.
void write_grid_function(const std::filesystem::path& base, const GridFunction& f,
                         const nlohmann::json& extra = nlohmann::json::object());
GridFunction read_grid_function(const std::filesystem::path& base);

// Mask file: one JSON header line, then little-endian u32 run lengths
// alternating between 0-runs and 1-runs, starting with a 0-run.
void write_mask(const std::filesystem::path& path, const LatticeSpec& lattice,
                std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> read_mask(const std::filesystem::path& path,
                                    LatticeSpec* lattice = nullptr);

nlohmann::json lattice_json(const LatticeSpec& lattice);
LatticeSpec lattice_from_json(const nlohmann::json& j);

// Stable textual output; the same document always gives the same bytes.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string format_double(double v);

// FNV-1a, 64 bit.
std::uint64_t fnv1a(const void* data, std::size_t bytes,
                    std::uint64_t seed = 1469598103934665603ull);
std::string hex64(std::uint64_t v);

}  // namespace flagwave
