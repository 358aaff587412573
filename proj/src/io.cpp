// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/io.hpp"

#include "condqpt/error.hpp"
#include "condqpt/format.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace condqpt::io {

using nlohmann::json;

namespace {

json tolerances_json(const Tolerances& t) {
    return {{"symmetry", t.symmetry},
            {"orthonormality", t.orthonormality},
            {"eigen_residual", t.eigen_residual},
            {"ql_max_sweeps", t.ql_max_sweeps},
            {"rank_tolerance", t.rank_tolerance},
            {"dense_cap", t.dense_cap},
            {"bound_slack", t.bound_slack},
            {"enumeration_cap", t.enumeration_cap},
            {"partition_crosscheck", t.partition_crosscheck},
            {"tail_cutoff", t.tail_cutoff},
            {"overlap_flush", t.overlap_flush},
            {"crossing_rel", t.crossing_rel},
            {"grover_crossing", t.grover_crossing},
            {"coarse_points", t.coarse_points}};
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

Tolerances tolerances_from(const json& j) {
    Tolerances t;
    read_if(j, "symmetry", t.symmetry);
    read_if(j, "orthonormality", t.orthonormality);
    read_if(j, "eigen_residual", t.eigen_residual);
    read_if(j, "ql_max_sweeps", t.ql_max_sweeps);
    read_if(j, "rank_tolerance", t.rank_tolerance);
    read_if(j, "dense_cap", t.dense_cap);
    read_if(j, "bound_slack", t.bound_slack);
    read_if(j, "enumeration_cap", t.enumeration_cap);
    read_if(j, "partition_crosscheck", t.partition_crosscheck);
    read_if(j, "tail_cutoff", t.tail_cutoff);
    read_if(j, "overlap_flush", t.overlap_flush);
    read_if(j, "crossing_rel", t.crossing_rel);
    read_if(j, "grover_crossing", t.grover_crossing);
    read_if(j, "coarse_points", t.coarse_points);
    return t;
}

json config_json(const RunConfig& c, bool with_paths) {
    json j{{"model", c.model},
           {"controls", c.controls},
           {"temperatures", c.temperatures},
           {"sizes", c.sizes},
           {"method", c.method},
           {"tolerances", tolerances_json(c.tolerances)},
           {"tail_cutoff", c.tail_cutoff ? json(*c.tail_cutoff) : json(nullptr)},
           {"long_run", c.long_run},
           {"workers", c.workers},
           {"seed", c.seed}};
    if (with_paths) {
        j["output_dir"] = c.output_dir;
        j["cache_dir"] = c.cache_dir;
    }
    return j;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ValidationError("cannot parse " + what + ": '" + s + "'");
    return v;
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string opt(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

const char* kPointColumns = "model,N,Np,Ni,control,temperature,p_cond,F_cond,F_norm,error_bar,config_hash";

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

void RunConfig::validate() const {
    if (model != "grover" && model != "fermion") throw ValidationError("config: model must be grover or fermion");
    if (method != "minors" && method != "enumeration")
        throw ValidationError("config: method must be minors or enumeration");
    if (controls.empty()) throw ValidationError("config: control grid is empty");
    if (temperatures.empty()) throw ValidationError("config: temperature grid is empty");
    if (sizes.empty()) throw ValidationError("config: size grid is empty");
    for (double t : temperatures)
        if (!(t > 0.0)) throw ValidationError("config: temperatures must be > 0");
    for (int s : sizes)
        if (s < 1) throw ValidationError("config: sizes must be >= 1");
    const auto& t = tolerances;
    for (double v : {t.symmetry, t.orthonormality, t.eigen_residual, t.rank_tolerance, t.bound_slack,
                     t.partition_crosscheck, t.tail_cutoff, t.overlap_flush, t.crossing_rel, t.grover_crossing})
        if (!(v > 0.0)) throw ValidationError("config: tolerances must be > 0");
    if (t.ql_max_sweeps < 1 || t.coarse_points < 2 || t.dense_cap < 2 || t.enumeration_cap < 1)
        throw ValidationError("config: iteration and size caps must be positive");
    if (tail_cutoff && !(*tail_cutoff > 0.0)) throw ValidationError("config: tail_cutoff must be > 0");
    if (workers < 1) throw ValidationError("config: workers must be >= 1");
}

std::string RunConfig::to_json() const { return config_json(*this, true).dump(2); }

RunConfig RunConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        read_if(j, "model", c.model);
        read_if(j, "controls", c.controls);
        read_if(j, "temperatures", c.temperatures);
        read_if(j, "sizes", c.sizes);
        read_if(j, "method", c.method);
        if (j.contains("tolerances")) c.tolerances = tolerances_from(j.at("tolerances"));
        if (j.contains("tail_cutoff") && !j.at("tail_cutoff").is_null()) c.tail_cutoff = j.at("tail_cutoff").get<double>();
        read_if(j, "long_run", c.long_run);
        read_if(j, "workers", c.workers);
        read_if(j, "seed", c.seed);
        read_if(j, "output_dir", c.output_dir);
        read_if(j, "cache_dir", c.cache_dir);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return from_json(read_text(path)); }

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_json(*this, false).dump())));
    return buf;
}

void ThermalPoint::validate() const {
    if (!(p_cond >= 0.0 && p_cond <= 1.0)) throw ValidationError("ThermalPoint: p_cond outside [0, 1]");
    if (!(error_bar >= 0.0)) throw ValidationError("ThermalPoint: negative error bar");
}

std::string points_csv(const std::vector<ThermalPoint>& points, const std::string& config_hash) {
    std::ostringstream os;
    os << kPointColumns << '\n';
    for (const auto& p : points) {
        p.validate();
        os << p.model << ',' << opt(p.N) << ',' << opt(p.Np) << ',' << opt(p.Ni) << ',' << fmt17(p.control) << ','
           << fmt17(p.temperature) << ',' << fmt17(p.p_cond) << ',' << opt(p.F_cond) << ',' << opt(p.F_norm) << ','
           << fmt17(p.error_bar) << ',' << config_hash << '\n';
    }
    return os.str();
}

std::vector<ThermalPoint> parse_points_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || split(line, ',') != split(kPointColumns, ','))
        throw ValidationError("points CSV: unexpected header");
    std::vector<ThermalPoint> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) throw ValidationError("points CSV: wrong field count in '" + line + "'");
        ThermalPoint p;
        p.model = f[0];
        auto oi = [](const std::string& s) { return s.empty() ? std::optional<int>{} : std::optional<int>{std::stoi(s)}; };
        auto od = [](const std::string& s, const char* w) {
            return s.empty() ? std::optional<double>{} : std::optional<double>{parse_double(s, w)};
        };
        p.N = oi(f[1]);
        p.Np = oi(f[2]);
        p.Ni = oi(f[3]);
        p.control = parse_double(f[4], "control");
        p.temperature = parse_double(f[5], "temperature");
        p.p_cond = parse_double(f[6], "p_cond");
        p.F_cond = od(f[7], "F_cond");
        p.F_norm = od(f[8], "F_norm");
        p.error_bar = parse_double(f[9], "error_bar");
        out.push_back(p);
    }
    return out;
}

std::string points_json(const std::vector<ThermalPoint>& points, const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_json(cfg, false);
    j["config_hash"] = cfg.hash();
    auto& arr = j["points"] = json::array();
    for (const auto& p : points) {
        p.validate();
        json e{{"model", p.model},
               {"control", p.control},
               {"temperature", p.temperature},
               {"p_cond", p.p_cond},
               {"error_bar", p.error_bar}};
        if (p.N) e["N"] = *p.N;
        if (p.Np) e["Np"] = *p.Np;
        if (p.Ni) e["Ni"] = *p.Ni;
        if (p.F_cond) e["F_cond"] = *p.F_cond;
        if (p.F_norm) e["F_norm"] = *p.F_norm;
        arr.push_back(std::move(e));
    }
    return j.dump(2);
}

std::vector<ThermalPoint> parse_points_json(const std::string& text) {
    std::vector<ThermalPoint> out;
    try {
        const auto j = json::parse(text);
        if (j.at("schema_version").get<int>() != kSchemaVersion) throw ValidationError("points JSON: unknown schema");
        for (const auto& e : j.at("points")) {
            ThermalPoint p;
            p.model = e.at("model").get<std::string>();
            p.control = e.at("control").get<double>();
            p.temperature = e.at("temperature").get<double>();
            p.p_cond = e.at("p_cond").get<double>();
            p.error_bar = e.at("error_bar").get<double>();
            if (e.contains("N")) p.N = e["N"].get<int>();
            if (e.contains("Np")) p.Np = e["Np"].get<int>();
            if (e.contains("Ni")) p.Ni = e["Ni"].get<int>();
            if (e.contains("F_cond")) p.F_cond = e["F_cond"].get<double>();
            if (e.contains("F_norm")) p.F_norm = e["F_norm"].get<double>();
            out.push_back(p);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("points JSON: ") + e.what());
    }
    return out;
}

std::string crossings_csv(const std::vector<criticality::CrossingRecord>& records) {
    std::ostringstream os;
    os << "size,control,temperature,lo,hi,tolerance,monotone\n";
    for (const auto& r : records)
        os << fmt17(r.size) << ',' << fmt17(r.control) << ',' << fmt17(r.temperature) << ',' << fmt17(r.lo) << ','
           << fmt17(r.hi) << ',' << fmt17(r.tolerance) << ',' << (r.monotone ? 1 : 0) << '\n';
    return os.str();
}

std::vector<criticality::CrossingRecord> parse_crossings_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("crossings CSV: empty input");
    const auto header = split(line, ',');
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    if (!col.count("size") || !col.count("control"))
        throw ValidationError("crossings CSV: header needs 'size' and 'control' columns");
    std::vector<criticality::CrossingRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size()) throw ValidationError("crossings CSV: wrong field count in '" + line + "'");
        criticality::CrossingRecord r;
        auto get = [&](const char* name, double fallback) {
            auto it = col.find(name);
            return it == col.end() || f[it->second].empty() ? fallback : parse_double(f[it->second], name);
        };
        r.size = get("size", 0.0);
        r.control = get("control", 0.0);
        r.temperature = get("temperature", 0.0);
        r.lo = get("lo", r.control);
        r.hi = get("hi", r.control);
        r.tolerance = get("tolerance", 0.0);
        r.monotone = get("monotone", 1.0) != 0.0;
        out.push_back(r);
    }
    return out;
}

std::string fit_json(const criticality::FitResult& f) {
    json j{{"model", criticality::to_string(f.model)},
           {"a", f.a},
           {"b", f.b},
           {"c", f.c},
           {"chi2", f.chi2},
           {"verdict", criticality::to_string(f.verdict)},
           {"reason", f.reason}};
    return j.dump(2);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void emit_points(const std::filesystem::path& dir, const std::string& stem, const std::vector<ThermalPoint>& points,
                 const RunConfig& cfg) {
    write_text(dir / (stem + ".csv"), points_csv(points, cfg.hash()));
    write_text(dir / (stem + ".json"), points_json(points, cfg));
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'C', 'Q', 'S', 'P', 'E', 'C', '0', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path SpectrumCache::resolve_dir(const std::string& fallback) {
    if (const char* env = std::getenv("CONDQPT_CACHE_DIR"); env && *env) return env;
    return fallback;
}

std::string SpectrumCache::key(const fermion::FermionParams& p) const {
    std::string bytes;
    auto add = [&](const void* data, std::size_t n) { bytes.append(static_cast<const char*>(data), n); };
    add(&p.N, sizeof p.N);
    add(&p.Ni, sizeof p.Ni);
    add(&p.eta, sizeof p.eta);
    add(&p.g, sizeof p.g);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::optional<linalg::EigenSystem> SpectrumCache::load(const fermion::FermionParams& p) const {
    if (dir_.empty()) return std::nullopt;
    std::ifstream is(dir_ / (key(p) + ".spec"), std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
    std::int32_t n = 0, ni = 0;
    double eta = 0, g = 0;
    if (!get(is, n) || !get(is, ni) || !get(is, eta) || !get(is, g)) return std::nullopt;
    // Hash collisions fall through to a fresh computation.
    if (n != p.N || ni != p.Ni || eta != p.eta || g != p.g) return std::nullopt;
    linalg::EigenSystem es;
    es.values.resize(n);
    es.vectors = linalg::Matrix(n, n);
    for (auto& v : es.values)
        if (!get(is, v)) return std::nullopt;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!get(is, es.vectors(i, j))) return std::nullopt;
    return es;
}

void SpectrumCache::store(const fermion::FermionParams& p, const linalg::EigenSystem& es) const {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto path = dir_ / (key(p) + ".spec");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write spectrum cache: " + path.string());
    os.write(kMagic, 8);
    put(os, static_cast<std::int32_t>(p.N));
    put(os, static_cast<std::int32_t>(p.Ni));
    put(os, p.eta);
    put(os, p.g);
    for (double v : es.values) put(os, v);
    for (double v : es.vectors.data()) put(os, v);
    if (!os) throw IoError("spectrum cache write failed: " + path.string());
}

linalg::EigenSystem SpectrumCache::spectrum(const fermion::FermionParams& p, const Tolerances& tol) const {
    if (auto hit = load(p)) return *hit;
    auto es = fermion::single_particle_spectrum(p, tol);
    store(p, es);
    return es;
}

}  // namespace condqpt::io
