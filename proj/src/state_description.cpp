#include "kerrpqd/state_description.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

using Kind = StateDescription::Kind;

struct KindInfo {
    Kind kind;
    const char* name;
    std::set<std::string> keys;
};

const std::array<KindInfo, 5>& kinds() {
    static const std::array<KindInfo, 5> table{{
        {Kind::Coherent, "coherent", {"alpha_re", "alpha_im"}},
        {Kind::SqueezedVacuum, "squeezed_vacuum", {"r", "phi"}},
        {Kind::KerrCoherent, "kerr_coherent", {"m", "alpha_re", "alpha_im"}},
        {Kind::SqueezeKerrCoherent, "squeeze_kerr_coherent", {"m", "alpha_re", "alpha_im", "r", "phi"}},
        {Kind::KerrSqueezedVacuum, "kerr_squeezed_vacuum", {"m", "r"}},
    }};
    return table;
}

const KindInfo& info(Kind k) {
    for (const auto& i : kinds()) {
        if (i.kind == k) return i;
    }
    throw InvalidArgument("unknown state kind");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument("expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        if (!out.emplace(key, tok.substr(eq + 1)).second) throw InvalidArgument("duplicate key '" + key + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    double x = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
        throw InvalidArgument("'" + key + "' needs a finite real, got '" + value + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    int x = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end) throw InvalidArgument("'" + key + "' needs an integer, got '" + value + "'");
    return x;
}

std::string format_real(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

StateDescription StateDescription::parse(const std::string& text) {
    auto kv = parse_key_values(text);
    const auto kind_it = kv.find("kind");
    if (kind_it == kv.end()) throw InvalidArgument("state description needs kind=<name>");
    const KindInfo* ki = nullptr;
    for (const auto& i : kinds()) {
        if (kind_it->second == i.name) ki = &i;
    }
    if (ki == nullptr) throw InvalidArgument("unknown state kind '" + kind_it->second + "'");
    kv.erase(kind_it);

    StateDescription d;
    d.kind = ki->kind;
    double a_re = 0.0;
    double a_im = 0.0;
    for (const auto& [key, value] : kv) {
        if (!ki->keys.count(key)) {
            throw InvalidArgument("key '" + key + "' is not valid for kind=" + std::string(ki->name));
        }
        if (key == "m") d.m = parse_int(key, value);
        if (key == "alpha_re") a_re = parse_real(key, value);
        if (key == "alpha_im") a_im = parse_real(key, value);
        if (key == "r") d.r = parse_real(key, value);
        if (key == "phi") d.phi = parse_real(key, value);
    }
    if (ki->keys.count("m") && !kv.count("m")) throw InvalidArgument("kind=" + std::string(ki->name) + " needs m");
    if (d.m < 1) throw InvalidArgument("m must be >= 1");
    if (d.r < 0.0) throw InvalidArgument("r must be >= 0; use phi for the squeezing direction");
    d.alpha = {a_re, a_im};
    return d;
}

std::string StateDescription::to_string() const {
    const KindInfo& ki = info(kind);
    std::ostringstream os;
    os << "kind=" << ki.name;
    if (ki.keys.count("m")) os << " m=" << m;
    if (ki.keys.count("alpha_re")) os << " alpha_re=" << format_real(alpha.real()) << " alpha_im=" << format_real(alpha.imag());
    if (ki.keys.count("r")) os << " r=" << format_real(r);
    if (ki.keys.count("phi")) os << " phi=" << format_real(phi);
    return os.str();
}

const char* StateDescription::kind_name(Kind k) { return info(k).name; }

SuperpositionState StateDescription::to_superposition() const {
    switch (kind) {
        case Kind::Coherent:
            return SuperpositionState({Branch{1.0, alpha, {}}});
        case Kind::SqueezedVacuum:
            return SuperpositionState({Branch{1.0, 0.0, SqueezeParam(r, phi)}});
        case Kind::KerrCoherent:
            return kerr_coherent_state(KerrOrder(m), alpha);
        case Kind::SqueezeKerrCoherent:
            return squeeze_then_kerr_state(KerrOrder(m), alpha, SqueezeParam(r, phi));
        case Kind::KerrSqueezedVacuum:
            return kerr_squeezed_vacuum(KerrOrder(m), r);
    }
    throw InvalidArgument("unknown state kind");
}

}  // namespace kerrpqd
