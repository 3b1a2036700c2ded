#include "homoglab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace homoglab {

namespace {

struct Entry {
    std::string value;
    int line;
    int col;
};

using KvMap = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string> kKnownKeys = {
    "experiment.kind",
    "field.kind", "field.c", "field.value", "field.lo", "field.hi",
    "field.lambda", "field.radius", "field.background", "field.inclusion",
    "field.anisotropy",
    "geometry.d", "geometry.nu", "geometry.t", "geometry.height", "geometry.h",
    "geometry.stencil",
    "phases.count", "phases.a", "phases.b",
    "stats.n", "stats.seed", "stats.pmax", "stats.cd",
    "output.dir",
};

KvMap tokenize(const std::string& text) {
    KvMap kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError(lineno, 1, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const int col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
        if (key.empty()) throw ConfigParseError(lineno, col, "empty key");
        for (char ch : key)
            if (!std::islower(static_cast<unsigned char>(ch)) &&
                !std::isdigit(static_cast<unsigned char>(ch)) && ch != '.' && ch != '_' &&
                ch != '-')
                throw ConfigParseError(lineno, col, "invalid character in key '" + key + "'");
        if (!kKnownKeys.count(key))
            throw ConfigParseError(lineno, col, "unknown key '" + key + "'");
        if (kv.count(key))
            throw ConfigParseError(lineno, col, "duplicate key '" + key + "'");
        if (value.empty()) throw ConfigParseError(lineno, col, "empty value for '" + key + "'");
        kv[key] = Entry{value, lineno, col};
    }
    return kv;
}

const Entry& require(const KvMap& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigParseError(0, 0, "missing required key '" + key + "'");
    return it->second;
}

double parse_double(const Entry& e) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigParseError(e.line, e.col, "expected a number, got '" + e.value + "'");
    }
}

long long parse_int(const Entry& e) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigParseError(e.line, e.col, "expected an integer, got '" + e.value + "'");
    }
}

std::uint64_t parse_u64(const Entry& e) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigParseError(e.line, e.col, "expected an unsigned integer, got '" + e.value + "'");
    }
}

std::vector<double> parse_list(const Entry& e) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (...) {
            throw ConfigParseError(e.line, e.col, "expected numbers, got '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigParseError(e.line, e.col, "empty list");
    return out;
}

}  // namespace

Config parse_config_text(const std::string& text) {
    const KvMap kv = tokenize(text);
    Config cfg;

    const Entry& kind = require(kv, "experiment.kind");
    static const std::set<std::string> kKinds = {"cell", "sweep", "fluct", "oracle-check",
                                                 "planelike-gap"};
    if (!kKinds.count(kind.value))
        throw ConfigParseError(kind.line, kind.col, "unknown experiment kind '" + kind.value + "'");
    cfg.experiment = kind.value;

    // field block
    const Entry& fk = require(kv, "field.kind");
    if (fk.value == "constant") cfg.field.kind = FieldKind::Constant;
    else if (fk.value == "stripe") cfg.field.kind = FieldKind::Stripe;
    else if (fk.value == "checkerboard") cfg.field.kind = FieldKind::Checkerboard;
    else if (fk.value == "poisson") cfg.field.kind = FieldKind::PoissonInclusions;
    else throw ConfigParseError(fk.line, fk.col, "unknown field kind '" + fk.value + "'");

    if (auto it = kv.find("field.c"); it != kv.end()) cfg.field.c = parse_double(it->second);
    if (auto it = kv.find("field.value"); it != kv.end())
        cfg.field.constant_value = parse_double(it->second);
    if (auto it = kv.find("field.lo"); it != kv.end()) cfg.field.lo = parse_double(it->second);
    if (auto it = kv.find("field.hi"); it != kv.end()) cfg.field.hi = parse_double(it->second);
    if (auto it = kv.find("field.lambda"); it != kv.end())
        cfg.field.lambda = parse_double(it->second);
    if (auto it = kv.find("field.radius"); it != kv.end())
        cfg.field.radius = parse_double(it->second);
    if (auto it = kv.find("field.background"); it != kv.end())
        cfg.field.background = parse_double(it->second);
    if (auto it = kv.find("field.inclusion"); it != kv.end())
        cfg.field.inclusion = parse_double(it->second);
    if (auto it = kv.find("field.anisotropy"); it != kv.end()) {
        if (it->second.value == "isotropic")
            cfg.field.anisotropy.kind = AnisotropyKind::Isotropic;
        else if (it->second.value == "onenorm")
            cfg.field.anisotropy.kind = AnisotropyKind::OneNorm;
        else
            throw ConfigParseError(it->second.line, it->second.col,
                                   "unknown anisotropy '" + it->second.value + "'");
    }

    // geometry block
    const Entry& ed = require(kv, "geometry.d");
    const long long d = parse_int(ed);
    if (d < 2 || d > 3) throw ConfigParseError(ed.line, ed.col, "geometry.d must be 2 or 3");
    cfg.field.dim = static_cast<int>(d);

    const Entry& enu = require(kv, "geometry.nu");
    const std::vector<double> nuv = parse_list(enu);
    if (nuv.size() != static_cast<std::size_t>(d))
        throw ConfigParseError(enu.line, enu.col, "geometry.nu needs d components");
    double nn = 0.0;
    for (double x : nuv) nn += x * x;
    if (nn <= 0.0) throw ConfigParseError(enu.line, enu.col, "geometry.nu must be nonzero");
    nn = std::sqrt(nn);
    for (std::size_t j = 0; j < nuv.size(); ++j) cfg.nu[j] = nuv[j] / nn;

    cfg.ts = parse_list(require(kv, "geometry.t"));
    for (double t : cfg.ts)
        if (!(t > 0)) throw ConfigParseError(require(kv, "geometry.t").line, 1, "t must be positive");

    const Entry& eh = require(kv, "geometry.h");
    cfg.h = parse_double(eh);
    if (!(cfg.h > 0)) throw ConfigParseError(eh.line, eh.col, "geometry.h must be positive");
    for (double t : cfg.ts) {
        const double q = t / cfg.h;
        if (std::fabs(std::llround(q) * cfg.h - t) > 1e-9 * std::max(1.0, t))
            throw ConfigParseError(eh.line, eh.col,
                                   "t is not a multiple of the grid spacing h");
    }

    const Entry& eht = require(kv, "geometry.height");
    {
        std::istringstream in(eht.value);
        std::string rule;
        in >> rule;
        double param = 0.0;
        const bool has_param = static_cast<bool>(in >> param);
        if (rule == "full" && !has_param) {
            cfg.height = {HeightRule::Full, 0.0};
        } else if (rule == "fixed" && has_param) {
            cfg.height = {HeightRule::Fixed, param};
        } else if (rule == "log" && has_param) {
            cfg.height = {HeightRule::Log, param};
        } else if (rule == "power" && has_param) {
            cfg.height = {HeightRule::Power, param};
        } else {
            throw ConfigParseError(eht.line, eht.col,
                                   "height must be: full | fixed V | log K | power A");
        }
        if (cfg.height.rule == HeightRule::Fixed) {
            const double q = cfg.height.param / cfg.h;
            if (cfg.height.param <= 0 ||
                std::fabs(std::llround(q) * cfg.h - cfg.height.param) > 1e-9)
                throw ConfigParseError(eht.line, eht.col,
                                       "fixed height is not a positive multiple of h");
        }
    }

    if (auto it = kv.find("geometry.stencil"); it != kv.end()) {
        if (it->second.value == "axis") cfg.stencil = Stencil::Axis;
        else if (it->second.value == "extended") cfg.stencil = Stencil::Extended;
        else
            throw ConfigParseError(it->second.line, it->second.col,
                                   "stencil must be axis or extended");
    }

    // phases block
    if (auto it = kv.find("phases.count"); it != kv.end()) {
        const long long m = parse_int(it->second);
        if (m < 2 || m > 16)
            throw ConfigParseError(it->second.line, it->second.col,
                                   "phases.count must be in [2, 16]");
        cfg.phase_count = static_cast<int>(m);
    }
    if (auto it = kv.find("phases.a"); it != kv.end()) cfg.a = static_cast<int>(parse_int(it->second));
    if (auto it = kv.find("phases.b"); it != kv.end()) cfg.b = static_cast<int>(parse_int(it->second));
    if (cfg.a == cfg.b || cfg.a < 0 || cfg.b < 0 || cfg.a >= cfg.phase_count ||
        cfg.b >= cfg.phase_count)
        throw ConfigParseError(0, 0, "phases.a/phases.b must be distinct indices below count");

    // stats block
    if (auto it = kv.find("stats.n"); it != kv.end()) {
        const long long n = parse_int(it->second);
        if (n < 1) throw ConfigParseError(it->second.line, it->second.col, "stats.n must be >= 1");
        cfg.replicates = static_cast<int>(n);
    }
    if (auto it = kv.find("stats.seed"); it != kv.end()) cfg.base_seed = parse_u64(it->second);
    if (auto it = kv.find("stats.pmax"); it != kv.end()) {
        const long long p = parse_int(it->second);
        if (p < 1 || p > 8)
            throw ConfigParseError(it->second.line, it->second.col, "stats.pmax must be in [1, 8]");
        cfg.p_max = static_cast<int>(p);
    }
    if (auto it = kv.find("stats.cd"); it != kv.end()) cfg.cd_sweep = parse_list(it->second);

    if (auto it = kv.find("output.dir"); it != kv.end()) cfg.out_dir = it->second.value;

    // Model-level validation surfaces here as a parse-time failure.
    try {
        cfg.field.validate();
    } catch (const ParameterError& pe) {
        throw ConfigParseError(fk.line, fk.col, pe.what());
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigParseError(0, 0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentPlan Config::plan() const {
    ExperimentPlan p;
    p.model = field;
    p.nu = nu;
    p.phases = PhaseSet::scalar(phase_count);
    p.a = a;
    p.b = b;
    p.ts = ts;
    p.height = height;
    p.h = h;
    p.replicates = replicates;
    p.base_seed = base_seed;
    p.p_max = p_max;
    p.stencil = stencil;
    return p;
}

std::string Config::canonical_blocks() const {
    char buf[64];
    std::ostringstream os;
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "field.kind=" << field.kind_name() << '\n';
    os << "field.c=" << num(field.c) << '\n';
    switch (field.kind) {
        case FieldKind::Constant:
            os << "field.value=" << num(field.constant_value) << '\n';
            break;
        case FieldKind::Stripe:
        case FieldKind::Checkerboard:
            os << "field.lo=" << num(field.lo) << '\n';
            os << "field.hi=" << num(field.hi) << '\n';
            break;
        case FieldKind::PoissonInclusions:
            os << "field.lambda=" << num(field.lambda) << '\n';
            os << "field.radius=" << num(field.radius) << '\n';
            os << "field.background=" << num(field.background) << '\n';
            os << "field.inclusion=" << num(field.inclusion) << '\n';
            break;
    }
    os << "field.anisotropy="
       << (field.anisotropy.kind == AnisotropyKind::OneNorm ? "onenorm" : "isotropic") << '\n';
    os << "geometry.d=" << field.dim << '\n';
    os << "geometry.nu=";
    for (int j = 0; j < field.dim; ++j) os << (j ? " " : "") << num(nu[j]);
    os << '\n';
    os << "geometry.t=";
    for (std::size_t i = 0; i < ts.size(); ++i) os << (i ? " " : "") << num(ts[i]);
    os << '\n';
    os << "geometry.height=" << height.name() << '\n';
    os << "geometry.h=" << num(h) << '\n';
    os << "geometry.stencil=" << (stencil == Stencil::Extended ? "extended" : "axis") << '\n';
    os << "phases.count=" << phase_count << '\n';
    os << "phases.a=" << a << '\n';
    os << "phases.b=" << b << '\n';
    os << "experiment.kind=" << experiment << '\n';
    return os.str();
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace homoglab
