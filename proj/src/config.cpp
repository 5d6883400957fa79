#include "ymlat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ymlat/errors.hpp"

namespace ymlat {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
T parse_int(std::string_view key, std::string_view v) {
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    const std::string s(v);
    char* end = nullptr;
    const double out = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + s + "'");
    return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (true) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (item.empty()) throw ConfigError("key '" + std::string(key) + "': empty list item");
        out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" + std::string(v) + "'");
}

std::string fmt(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x); // shortest form that round-trips
    return std::string(buf, r.ptr);
}

std::string fmt(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + fmt(xs[k]);
    return s;
}

std::string body(const ExperimentConfig& c, bool with_local) {
    std::ostringstream os;
    os << "group = " << c.group << '\n'
       << "action = " << c.action << '\n'
       << "N0 = " << c.N0 << '\n'
       << "N1 = " << c.N1 << '\n'
       << "seed = " << c.seed << '\n'
       << "chains = " << c.chains << '\n'
       << "samples = " << c.samples << '\n'
       << "burnin = " << c.burnin << '\n'
       << "thin = " << c.thin << '\n'
       << "proposal_sigma = " << fmt(c.proposal_sigma) << '\n'
       << "truncation = " << c.truncation << '\n'
       << "alpha = " << fmt(c.alpha) << '\n'
       << "q = " << fmt(c.q) << '\n'
       << "beta = " << fmt(c.beta) << '\n'
       << "threshold = " << fmt(c.threshold) << '\n'
       << "max_area = " << c.max_area << '\n'
       << "hoelder_samples = " << c.hoelder_samples << '\n'
       << "allow_large = " << (c.allow_large ? "true" : "false") << '\n';
    if (with_local) os << "workers = " << c.workers << '\n' << "output = " << c.output << '\n';
    return os.str();
}

} // namespace

std::vector<std::string> config_keys() {
    return {"group", "action", "N0", "N1", "seed", "chains", "samples", "burnin", "thin", "proposal_sigma", "truncation",
            "alpha", "q", "beta", "threshold", "max_area", "hoelder_samples", "allow_large", "workers", "output"};
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view v) {
    v = trim(v);
    if (key == "group") {
        if (v != "u1" && v != "su2") throw ConfigError("key 'group': expected u1 or su2, got '" + std::string(v) + "'");
        c.group = v;
    } else if (key == "action") {
        if (v != "villain" && v != "wilson")
            throw ConfigError("key 'action': expected villain or wilson, got '" + std::string(v) + "'");
        c.action = v;
    } else if (key == "N0") c.N0 = parse_int<int>(key, v);
    else if (key == "N1" || key == "N") c.N1 = parse_int<int>(key, v);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "chains") c.chains = parse_int<int>(key, v);
    else if (key == "samples") c.samples = parse_int<int>(key, v);
    else if (key == "burnin") c.burnin = parse_int<int>(key, v);
    else if (key == "thin") c.thin = parse_int<int>(key, v);
    else if (key == "proposal_sigma") c.proposal_sigma = parse_double(key, v);
    else if (key == "truncation") c.truncation = parse_int<int>(key, v);
    else if (key == "alpha") c.alpha = parse_list(key, v);
    else if (key == "q") c.q = parse_list(key, v);
    else if (key == "beta") c.beta = parse_list(key, v);
    else if (key == "threshold") c.threshold = parse_double(key, v);
    else if (key == "max_area") c.max_area = parse_int<int>(key, v);
    else if (key == "hoelder_samples") c.hoelder_samples = parse_int<int>(key, v);
    else if (key == "allow_large") c.allow_large = parse_bool(key, v);
    else if (key == "workers") c.workers = parse_int<int>(key, v);
    else if (key == "output") {
        if (v.empty()) throw ConfigError("key 'output': empty path");
        c.output = v;
    } else throw ConfigError("unknown key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
    ExperimentConfig c;
    int line_no = 0;
    std::vector<std::string> seen;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(where + "duplicate key '" + key + "'");
        seen.push_back(key);
        try {
            set_config_value(c, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& p) {
    std::ifstream is(p);
    if (!is) throw ConfigError(p.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), p.string());
}

std::string to_text(const ExperimentConfig& c) { return body(c, true); }

void validate(const ExperimentConfig& c) {
    const auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (c.N1 < 1) fail("N1 must be >= 1");
    if (c.N0 < 1 || c.N0 > c.N1) fail("need 1 <= N0 <= N1");
    if (c.N1 > 12) fail("N1 > 12 is not supported");
    if (c.chains < 1) fail("chains must be >= 1");
    if (c.samples < 0) fail("samples must be >= 0");
    if (c.burnin < -1 || c.thin < -1 || c.thin == 0) fail("burnin must be >= 0 and thin >= 1 (or -1 for defaults)");
    if (c.proposal_sigma < 0.0) fail("proposal_sigma must be >= 0");
    if (c.truncation < 1) fail("truncation must be >= 1");
    if (c.alpha.empty()) fail("alpha list is empty");
    for (double a : c.alpha)
        if (!(a > 0.0 && a <= 1.0)) fail("alpha values must lie in (0, 1]");
    for (double q : c.q)
        if (!(q >= 1.0)) fail("q values must be >= 1");
    for (double b : c.beta)
        if (!(b > 0.0)) fail("beta values must be > 0");
    if (!(c.threshold > 0.0)) fail("threshold must be > 0");
    if (c.max_area < 1) fail("max_area must be >= 1");
    if (c.hoelder_samples < 0) fail("hoelder_samples must be >= 0");
    if (c.workers < 1) fail("workers must be >= 1");
}

std::string config_hash(const ExperimentConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : body(c, false)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path output_directory(const ExperimentConfig& c) {
    const std::filesystem::path p(c.output);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("YMLAT_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / p;
    return p;
}

} // namespace ymlat
