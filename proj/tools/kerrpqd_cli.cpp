#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "kerrpqd/errors.hpp"
#include "kerrpqd/run.hpp"

namespace {

struct Flag {
    const char* key;
    const char* help;
};

// Every RunConfig key except `command`, which is the subcommand.
constexpr Flag kFlags[] = {
    {"state", "state description, e.g. \"kind=squeeze_kerr_coherent m=3 alpha_re=1 alpha_im=0 r=0.2\""},
    {"t", "ordering parameter (single evaluation)"},
    {"t-min", "curve start ordering"},
    {"t-max", "curve end ordering"},
    {"t-points", "curve point count"},
    {"eta-l", "network transmissivity"},
    {"eta-d", "detector efficiency"},
    {"p-d", "dark-count probability"},
    {"nbar", "environment mean photon number"},
    {"tbar", "input ordering threshold for the uniform inequality"},
    {"s", "detector ordering (estimate; defaults to s_bar)"},
    {"r", "squeezing for the squeezed-input and GBS inequalities"},
    {"modes", "mode count for the GBS inequality"},
    {"eps", "approximation error for the GBS inequality"},
    {"grid-r", "window half-width (0 = automatic)"},
    {"grid-n", "grid points per axis for pqd export"},
    {"eps-neg", "negativity floor for the threshold search"},
    {"tol-t", "threshold bisection tolerance"},
    {"samples", "Monte-Carlo sample count"},
    {"seed", "Monte-Carlo seed"},
    {"sweep-points", "noise grid points per axis for sweep"},
    {"threads", "worker threads (0 = hardware concurrency)"},
    {"out", "output file (written atomically, with a .meta sidecar)"},
};

constexpr const char* kCommands[][2] = {
    {"pqd", "export the t-PQD on a grid as CSV"},
    {"negativity", "negativity volume at --t or over a t-curve"},
    {"threshold", "ordering threshold t_bar by bisection"},
    {"simulability", "noise-threshold verdicts"},
    {"sweep", "verdicts over an (eta_L, p_D) grid plus boundary contours"},
    {"verify", "oracle and identity verification suite"},
    {"estimate", "Monte-Carlo estimate of the no-click probability"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordered quasi-probabilities, negativity thresholds and simulability verdicts for Kerr states"};
    app.require_subcommand(1);
    std::map<std::string, std::string> flags;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file; flags override it");
    for (const auto& f : kFlags) app.add_option(std::string("--") + f.key, flags[f.key], f.help);
    for (const auto& c : kCommands) app.add_subcommand(c[0], c[1])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error=InvalidArgument detail=" << e.what() << "\n";
        return 2;
    }

    std::map<std::string, std::string> kv;
    try {
        if (!config_path.empty()) kv = kerrpqd::read_config_file(config_path);
    } catch (const kerrpqd::Error& e) {
        std::cerr << "error=" << e.code() << " detail=" << e.what() << "\n";
        return 2;
    }
    for (const auto& f : kFlags) {
        if (app.count(std::string("--") + f.key) > 0) kv[f.key] = flags[f.key];
    }
    kv["command"] = app.get_subcommands().front()->get_name();
    return kerrpqd::run(kv, std::cout, std::cerr);
}
