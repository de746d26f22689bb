#include "sobconst/params.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <tuple>

namespace sobconst {

std::ostream& operator<<(std::ostream& os, const ExponentPair& pair) {
    return os << "(p=" << pair.p() << ", q=" << pair.q() << ", alpha=" << pair.alpha()
              << ", d=" << pair.d() << ")";
}

ExponentPair pair_from_pq(double p, double q, int d) {
    if (!(q >= p)) throw DomainError("q must be >= p");
    if (d < 1) throw DomainError("dimension d must be >= 1");
    const double alpha = q == p ? 0.0 : d * (1.0 / p - 1.0 / q);
    return {p, alpha, d};
}

void GroupGeometry::validate() const {
    if (d < 1) throw DomainError("geometry: d must be >= 1");
    const bool finite = std::isfinite(D) && std::isfinite(b) && std::isfinite(c_heat) &&
                        std::isfinite(c_delta) && std::isfinite(c_chi) &&
                        std::isfinite(c_delta_chi_inv);
    if (!finite) throw DomainError("geometry: all constants must be finite");
    if (D < 0) throw DomainError("geometry: D must be >= 0");
    if (!(b > 0)) throw DomainError("geometry: b must be > 0");
    if (!(c_heat > 0)) throw DomainError("geometry: c_heat must be > 0");
    if (c_delta < 0 || c_chi < 0 || c_delta_chi_inv < 0) {
        throw DomainError("geometry: c-values must be >= 0");
    }
}

double tau_delta(const GroupGeometry& g) {
    g.validate();
    const double shift = 2.0 * g.D + g.b0();
    return std::max(2.0 / g.b * shift * shift - 0.25 * g.c_delta * g.c_delta, 1.0);
}

double tau_chi(const GroupGeometry& g) {
    g.validate();
    const double shift = g.c_delta_chi_inv + 2.0 * g.D + g.b0();
    return std::max(2.0 / g.b * shift * shift - 0.25 * g.c_chi * g.c_chi, 1.0);
}

double s_chi(double c_chi_delta_inv) {
    if (!(c_chi_delta_inv >= 0)) throw DomainError("s_chi requires c(chi delta^-1) >= 0");
    return std::exp(c_chi_delta_inv);
}

std::vector<ExponentPair> make_grid(const ParameterGrid& spec) {
    for (double f : spec.alpha_fractions) {
        if (!(f > 0.0 && f < 1.0)) throw DomainError("alpha fractions must lie in (0, 1)");
    }
    for (double p : spec.p_values) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p values must lie in (1, inf)");
    }
    for (int d : spec.d_values) {
        if (d < 1) throw DomainError("d values must be >= 1");
    }
    std::vector<ExponentPair> out;
    for (int d : spec.d_values) {
        for (double p : spec.p_values) {
            for (double f : spec.alpha_fractions) out.emplace_back(p, f * d / p, d);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const ExponentPair& a, const ExponentPair& b) {
        return std::tuple(a.d(), a.p(), a.alpha()) < std::tuple(b.d(), b.p(), b.alpha());
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw DomainError("parameter grid is empty");
    return out;
}

std::vector<double> geometric_p_values(double lo, double hi, int n) {
    if (!(lo > 1.0 && hi > lo) || n < 2) throw DomainError("geometric grid needs 1 < lo < hi, n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo - 1.0);
    const double b = std::log(hi - 1.0);
    for (int i = 0; i < n; ++i) out[i] = 1.0 + std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

ParameterGrid default_grid() {
    ParameterGrid g;
    g.p_values = geometric_p_values(1.05, 16.0, 13);
    for (int i = 1; i <= 9; ++i) g.alpha_fractions.push_back(i / 10.0);
    g.d_values = {1, 2, 3, 4};
    return g;
}

ParameterGrid refine_grid(const ParameterGrid& grid) {
    ParameterGrid out;
    out.d_values = grid.d_values;
    const auto& ps = grid.p_values;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out.p_values.push_back(ps[i]);
        if (i + 1 < ps.size()) out.p_values.push_back(1.0 + std::sqrt((ps[i] - 1.0) * (ps[i + 1] - 1.0)));
    }
    const auto& fs = grid.alpha_fractions;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        out.alpha_fractions.push_back(fs[i]);
        if (i + 1 < fs.size()) out.alpha_fractions.push_back(0.5 * (fs[i] + fs[i + 1]));
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty entry in number list '" + value + "'");
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(item.c_str(), &end);
        if (errno != 0 || end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ConfigError("not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty number list");
    return out;
}

ParameterGrid parse_grid_config(const std::string& text, ParameterGrid base) {
    const auto kv = parse_key_values(text);
    if (auto it = kv.find("p_values"); it != kv.end()) {
        base.p_values = parse_number_list(it->second);
        std::sort(base.p_values.begin(), base.p_values.end());
    }
    if (auto it = kv.find("alpha_fractions"); it != kv.end()) {
        base.alpha_fractions = parse_number_list(it->second);
        std::sort(base.alpha_fractions.begin(), base.alpha_fractions.end());
    }
    if (auto it = kv.find("d_values"); it != kv.end()) {
        base.d_values.clear();
        for (double v : parse_number_list(it->second)) {
            if (v != std::floor(v) || v < 1) throw ConfigError("d_values must be positive integers");
            base.d_values.push_back(static_cast<int>(v));
        }
    }
    return base;
}

std::string fingerprint(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void append_number(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s += buf;
}

}  // namespace

std::string canonical_string(const ParameterGrid& grid) {
    std::string s = "p:";
    for (double v : grid.p_values) { append_number(s, v); s += ','; }
    s += ";f:";
    for (double v : grid.alpha_fractions) { append_number(s, v); s += ','; }
    s += ";d:";
    for (int v : grid.d_values) { s += std::to_string(v); s += ','; }
    return s;
}

std::string canonical_string(const GroupGeometry& g) {
    std::string s = "d:" + std::to_string(g.d);
    for (double v : {g.D, g.b, g.c_heat, g.c_delta, g.c_chi, g.c_delta_chi_inv}) {
        s += ',';
        append_number(s, v);
    }
    return s;
}

}  // namespace sobconst
