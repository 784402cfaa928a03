#include "ousv_app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace ousv::app {

McSettings RunConfig::mc_settings() const {
    McSettings s;
    s.n_paths = numerics.n_paths;
    s.grid_n = numerics.grid_n;
    s.seed = numerics.seed;
    s.workers = numerics.workers;
    s.antithetic = numerics.antithetic;
    return s;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

struct Entry {
    std::string value;
    int line;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::set<std::string, std::less<>>& known_keys() {
    static const std::set<std::string, std::less<>> keys{
        "market.spot",       "market.rate",       "market.drift",     "option.strike",      "option.maturity",
        "ou.alpha",          "ou.k_vol",          "ou.y0",            "vol.family",         "vol.sigma0",
        "vol.a",             "vol.b",             "vol.lo",           "vol.hi",             "measure.rho",
        "measure.nu",        "numerics.grid_n",   "numerics.n_paths", "numerics.seed",      "numerics.quad_nodes",
        "numerics.inversion_U", "numerics.moment_order", "numerics.workers", "numerics.antithetic",
        "numerics.cdf_samples", "output.path",    "output.format",    "method",
    };
    return keys;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry, std::less<>> entries) : entries_(std::move(entries)) {}

    bool has(std::string_view key) const { return entries_.count(key) != 0; }

    const std::string& raw(std::string_view key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(std::string(key), "missing required key");
        used_.insert(std::string(key));
        return it->second.value;
    }

    double number(std::string_view key) const {
        const std::string& text = raw(key);
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            throw ConfigError(std::string(key), "expected a number, got '" + text + "'");
        return out;
    }

    double number_or(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t integer(std::string_view key) const {
        const std::string& text = raw(key);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            throw ConfigError(std::string(key), "expected a non-negative integer, got '" + text + "'");
        return out;
    }

    std::uint64_t integer_or(std::string_view key, std::uint64_t fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    bool boolean_or(std::string_view key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string& text = raw(key);
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw ConfigError(std::string(key), "expected true or false, got '" + text + "'");
    }

    std::string text_or(std::string_view key, std::string fallback) const {
        return has(key) ? raw(key) : std::move(fallback);
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_)
            if (!used_.count(key))
                throw ConfigError(key, "not used by this configuration (line " + std::to_string(entry.line) + ")");
    }

private:
    std::map<std::string, Entry, std::less<>> entries_;
    mutable std::set<std::string> used_;
};

// Module validators report "key: domain"; keep the key for the diagnostic.
template <class F>
void checked(F&& f) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        const auto colon = what.find(':');
        if (colon == std::string::npos) throw ConfigError("", what);
        throw ConfigError(what.substr(0, colon), std::string(trim(std::string_view(what).substr(colon + 1))));
    }
}

template <class T>
T bounded(const Reader& in, std::string_view key, std::uint64_t fallback, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t v = in.integer_or(key, fallback);
    if (v < lo || v > hi)
        throw ConfigError(std::string(key), "value in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                "] required, got " + std::to_string(v));
    return static_cast<T>(v);
}

VolSpec read_vol(const Reader& in) {
    const std::string& name = in.raw("vol.family");
    VolFamily family;
    try {
        family = vol_family_from_string(name);
    } catch (const std::invalid_argument&) {
        throw ConfigError("vol.family", "expected constant, exp_clamped or sigmoid_affine, got '" + name + "'");
    }
    VolSpec out = VolSpec::constant(0.2);
    checked([&] {
        switch (family) {
            case VolFamily::Constant:
                out = VolSpec::constant(in.number("vol.sigma0"));
                break;
            case VolFamily::ExpClamped:
                out = VolSpec::exp_clamped(in.number("vol.a"), in.number("vol.b"), in.number("vol.lo"),
                                           in.number("vol.hi"));
                break;
            case VolFamily::SigmoidAffine:
                out = VolSpec::sigmoid_affine(in.number("vol.lo"), in.number("vol.hi"));
                break;
        }
    });
    return out;
}

MeasureSpec read_measure(const Reader& in) {
    MeasureSpec m;
    m.rho = in.number_or("measure.rho", 0.0);
    if (in.has("measure.nu") && in.raw("measure.nu") != "zero") {
        m.nu_kind = MeasureSpec::Nu::Constant;
        m.nu = in.number("measure.nu");
    }
    checked([&] { m.validate(); });
    return m;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry, std::less<>> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().count(key)) throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
        if (entries.count(key)) throw ConfigError(key, "duplicate key (line " + std::to_string(line_no) + ")");
        entries.emplace(key, Entry{value, line_no});
    }

    const Reader in(std::move(entries));
    RunConfig c;

    c.market.spot = in.number("market.spot");
    c.market.rate = in.number("market.rate");
    c.market.drift = in.number_or("market.drift", c.market.rate);
    checked([&] { c.market.validate(); });

    c.option.strike = in.number("option.strike");
    c.option.maturity = in.number("option.maturity");
    checked([&] { c.option.validate(); });

    c.ou.alpha = in.number("ou.alpha");
    c.ou.k_vol = in.number("ou.k_vol");
    c.ou.y0 = in.number("ou.y0");
    checked([&] { c.ou.validate(); });

    c.vol = read_vol(in);
    c.measure = read_measure(in);

    auto& n = c.numerics;
    n.grid_n = bounded<std::size_t>(in, "numerics.grid_n", n.grid_n, 1, 1u << 20);
    n.n_paths = bounded<std::size_t>(in, "numerics.n_paths", n.n_paths, 1, 100000000);
    n.seed = in.integer_or("numerics.seed", n.seed);
    n.quad_nodes = bounded<std::size_t>(in, "numerics.quad_nodes", n.quad_nodes, 2, 4096);
    n.inversion_U = in.number_or("numerics.inversion_U", n.inversion_U);
    if (!(n.inversion_U >= 0.0) || !std::isfinite(n.inversion_U))
        throw ConfigError("numerics.inversion_U", "inversion_U >= 0 required (0 selects the default)");
    n.moment_order = bounded<int>(in, "numerics.moment_order", static_cast<std::uint64_t>(n.moment_order), 1, 40);
    n.workers = bounded<unsigned>(in, "numerics.workers", n.workers, 1, 1024);
    n.antithetic = in.boolean_or("numerics.antithetic", n.antithetic);
    n.cdf_samples = bounded<std::size_t>(in, "numerics.cdf_samples", n.cdf_samples, 1, 100000000);

    c.output.path = in.text_or("output.path", "");
    c.output.format = in.text_or("output.format", "csv");
    if (c.output.format != "csv") throw ConfigError("output.format", "only 'csv' is supported");

    if (in.has("method")) {
        try {
            c.method = pricing_method_from_string(in.raw("method"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("method", e.what());
        }
    }

    in.reject_unused();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render(const RunConfig& c) {
    std::ostringstream out;
    auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    line("market.spot", format_number(c.market.spot));
    line("market.rate", format_number(c.market.rate));
    line("market.drift", format_number(c.market.drift));
    line("option.strike", format_number(c.option.strike));
    line("option.maturity", format_number(c.option.maturity));
    line("ou.alpha", format_number(c.ou.alpha));
    line("ou.k_vol", format_number(c.ou.k_vol));
    line("ou.y0", format_number(c.ou.y0));
    line("vol.family", std::string(to_string(c.vol.family())));
    switch (c.vol.family()) {
        case VolFamily::Constant:
            line("vol.sigma0", format_number(c.vol.sigma0()));
            break;
        case VolFamily::ExpClamped:
            line("vol.a", format_number(c.vol.a()));
            line("vol.b", format_number(c.vol.b()));
            line("vol.lo", format_number(c.vol.lo()));
            line("vol.hi", format_number(c.vol.hi()));
            break;
        case VolFamily::SigmoidAffine:
            line("vol.lo", format_number(c.vol.lo()));
            line("vol.hi", format_number(c.vol.hi()));
            break;
    }
    line("measure.rho", format_number(c.measure.rho));
    line("measure.nu",
         c.measure.nu_kind == MeasureSpec::Nu::IdenticallyZero ? std::string("zero") : format_number(c.measure.nu));
    line("numerics.grid_n", std::to_string(c.numerics.grid_n));
    line("numerics.n_paths", std::to_string(c.numerics.n_paths));
    line("numerics.seed", std::to_string(c.numerics.seed));
    line("numerics.quad_nodes", std::to_string(c.numerics.quad_nodes));
    line("numerics.inversion_U", format_number(c.numerics.inversion_U));
    line("numerics.moment_order", std::to_string(c.numerics.moment_order));
    line("numerics.workers", std::to_string(c.numerics.workers));
    line("numerics.antithetic", c.numerics.antithetic ? "true" : "false");
    line("numerics.cdf_samples", std::to_string(c.numerics.cdf_samples));
    if (!c.output.path.empty()) line("output.path", c.output.path);
    line("output.format", c.output.format);
    if (c.method) line("method", std::string(to_string(*c.method)));
    return out.str();
}

std::string config_digest(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : render(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ousv::app
