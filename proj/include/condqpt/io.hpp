// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief Run configuration, result records, CSV/JSON persistence, and the
 *        on-disk cache of single-particle spectra.
 *
 * CSV files use a fixed column order, 17 significant digits and LF line
 * endings. JSON files carry a schema version, the full RunConfig and its
 * hash. Neither contains wall-clock data, so identical configs produce
 * byte-identical files.
 */

#pragma once

#include "condqpt/criticality.hpp"
#include "condqpt/fermion.hpp"
#include "condqpt/tolerances.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace condqpt::io {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string model = "fermion";          ///< "grover" or "fermion"
    std::vector<double> controls;           ///< Gamma/J or g/eta grid
    std::vector<double> temperatures;       ///< k_B T in units of J or eta
    std::vector<int> sizes;                 ///< N (Grover) or Np (fermion)
    std::string method = "minors";          ///< fermion p_cond route
    Tolerances tolerances;
    std::optional<double> tail_cutoff;
    bool long_run = false;
    unsigned workers = 1;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string cache_dir;

    /// Grids nonempty, tolerances positive, model known. Throws ValidationError.
    void validate() const;
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
    /// FNV-1a over the result-affecting fields, as 16 hex digits.
    std::string hash() const;
};

struct ThermalPoint {
    std::string model;
    std::optional<int> N;
    std::optional<int> Np;
    std::optional<int> Ni;
    double control = 0.0;
    double temperature = 0.0;
    double p_cond = 0.0;
    std::optional<double> F_cond;
    std::optional<double> F_norm;
    double error_bar = 0.0;
    double compute_seconds = 0.0;   ///< kept out of the deterministic files

    void validate() const;
    bool operator==(const ThermalPoint&) const = default;
};

std::string points_csv(const std::vector<ThermalPoint>& points, const std::string& config_hash);
std::vector<ThermalPoint> parse_points_csv(const std::string& text);

std::string points_json(const std::vector<ThermalPoint>& points, const RunConfig& cfg);
std::vector<ThermalPoint> parse_points_json(const std::string& text);

std::string crossings_csv(const std::vector<criticality::CrossingRecord>& records);
/// Needs `size` and `control` columns; temperature/lo/hi/tolerance optional.
std::vector<criticality::CrossingRecord> parse_crossings_csv(const std::string& text);

std::string fit_json(const criticality::FitResult& f);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
void emit_points(const std::filesystem::path& dir, const std::string& stem, const std::vector<ThermalPoint>& points,
                 const RunConfig& cfg);

/// Binary cache of single-particle spectra keyed by (N, Ni, eta, g).
class SpectrumCache {
public:
    explicit SpectrumCache(std::filesystem::path dir);

    /// CONDQPT_CACHE_DIR if set, else `fallback`.
    static std::filesystem::path resolve_dir(const std::string& fallback);

    std::string key(const fermion::FermionParams& p) const;
    std::optional<linalg::EigenSystem> load(const fermion::FermionParams& p) const;
    void store(const fermion::FermionParams& p, const linalg::EigenSystem& es) const;

    /// Cached spectrum or a fresh computation that is then stored.
    linalg::EigenSystem spectrum(const fermion::FermionParams& p, const Tolerances& tol = default_tolerances()) const;

private:
    std::filesystem::path dir_;
};

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace condqpt::io
