#pragma once

#include <map>
#include <string>

#include "kerrpqd/states.hpp"

namespace kerrpqd {

/// Text description of a single-mode state, `kind=<name> key=value ...`.
///
///   coherent               |alpha>
///   squeezed_vacuum        S(r e^{i phi})|0>
///   kerr_coherent          U(pi/m)|alpha>
///   squeeze_kerr_coherent  S(r e^{i phi}) U(pi/m)|alpha>
///   kerr_squeezed_vacuum   U(pi/m) S(r)|0>
struct StateDescription {
    enum class Kind { Coherent, SqueezedVacuum, KerrCoherent, SqueezeKerrCoherent, KerrSqueezedVacuum };

    Kind kind = Kind::Coherent;
    int m = 1;
    cplx alpha{0.0, 0.0};
    double r = 0.0;
    double phi = 0.0;

    /// Throws InvalidArgument on unknown kinds, unknown or inapplicable keys,
    /// malformed numbers, and out-of-domain values.
    static StateDescription parse(const std::string& text);
    /// Canonical form; parse(to_string()) reproduces the description exactly.
    std::string to_string() const;

    SuperpositionState to_superposition() const;
    static const char* kind_name(Kind k);
};

/// Splits whitespace-separated `key=value` tokens; duplicate keys are rejected.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Strict double parse of the entire token.
double parse_real(const std::string& key, const std::string& value);
int parse_int(const std::string& key, const std::string& value);

/// Shortest decimal form that round-trips to the same double.
std::string format_real(double x);

}  // namespace kerrpqd
