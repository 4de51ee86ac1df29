#include "kerrpqd/run.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Pqd, "pqd"},           {Command::Negativity, "negativity"},
    {Command::Threshold, "threshold"}, {Command::Simulability, "simulability"},
    {Command::Sweep, "sweep"},       {Command::Verify, "verify"},
    {Command::Estimate, "estimate"},
};

// 17 significant digits, fixed scientific layout.
std::string sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t x = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end) throw InvalidArgument("'" + key + "' needs a non-negative integer, got '" + value + "'");
    return x;
}

const StateDescription& require_state(const RunConfig& c) {
    if (!c.state) throw InvalidArgument(std::string(command_name(c.command)) + " needs --state");
    return *c.state;
}

QuadratureSpec quadrature_of(const RunConfig& c) {
    QuadratureSpec q;
    q.half_width = c.grid_r;
    q.threads = c.threads;
    return q;
}

void emit(const RunConfig& c, const std::string& body, std::ostream& out) {
    if (c.out.empty()) {
        out << body;
    } else {
        write_atomic(c.out, body);
    }
}

// Config echo (re-consumable with --config) followed by result metadata as
// comments.
void write_sidecar(const RunConfig& c, const std::string& results) {
    if (c.out.empty()) return;
    std::string meta = c.echo();
    std::istringstream lines(results);
    for (std::string line; std::getline(lines, line);) meta += "# " + line + "\n";
    write_atomic(c.out + ".meta", meta);
}

int cmd_pqd(const RunConfig& c, std::ostream& out) {
    const StateDescription& desc = require_state(c);
    const double t = c.t.value_or(0.0);
    const SuperpositionState st = desc.to_superposition();
    const PqdFunction w = superposition_pqd(st, t);
    const double R = c.grid_r > 0.0 ? c.grid_r : default_window(st);
    const Grid g = Grid::nodes(R, c.grid_n);
    const GridValues v = evaluate_grid(w, g);
    std::string csv = "beta_re,beta_im,w\n";
    csv.reserve(csv.size() + static_cast<std::size_t>(g.n) * g.n * 72);
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            csv += sci(g.coord(ix)) + ',' + sci(g.coord(iy)) + ',' + sci(v.at(iy, ix)) + '\n';
        }
    }
    emit(c, csv, out);
    std::ostringstream summary;
    summary << "grid_window=" << sci(R) << "\n"
            << "norm_residual=" << sci(w.integral().real() - 1.0) << "\n"
            << "max_abs_imag=" << sci(v.max_abs_imag) << "\n";
    write_sidecar(c, summary.str());
    if (!c.out.empty()) out << "rows=" << g.n * g.n << "\n" << summary.str();
    return 0;
}

int cmd_negativity(const RunConfig& c, std::ostream& out) {
    const SuperpositionState st = require_state(c).to_superposition();
    const QuadratureSpec q = quadrature_of(c);
    NegativityCurve curve;
    if (c.t) {
        const auto r = negativity_volume(st, *c.t, q);
        curve.points.push_back({*c.t, r.value, r.err});
    } else {
        curve = negativity_curve(st, c.t_min, c.t_max, c.t_points, q);
    }
    std::string csv = "t,negativity,err\n";
    for (const auto& p : curve.points) csv += sci(p.t) + ',' + sci(p.negativity) + ',' + sci(p.err) + '\n';
    emit(c, csv, out);
    std::ostringstream summary;
    summary << "monotone_within_error=" << (curve.monotone_within_error() ? "true" : "false") << "\n"
            << "max_err=" << sci(curve.max_err()) << "\n";
    write_sidecar(c, summary.str());
    if (!c.out.empty()) out << summary.str();
    return 0;
}

int cmd_threshold(const RunConfig& c, std::ostream& out) {
    const SuperpositionState st = require_state(c).to_superposition();
    ThresholdOptions opts;
    opts.eps_neg = c.eps_neg;
    opts.tol_t = c.tol_t;
    const ThresholdResult r = find_threshold(st, opts, quadrature_of(c));
    std::ostringstream rep;
    rep << "t_bar=" << sci(r.t_bar) << "\n"
        << "eps_neg=" << sci(opts.eps_neg) << "\n"
        << "tol_t=" << sci(opts.tol_t) << "\n"
        << "t_sup=" << sci(r.t_sup) << "\n"
        << "evaluations=" << r.evaluations << "\n";
    out << rep.str();
    if (!c.out.empty()) {
        write_atomic(c.out, rep.str());
        write_sidecar(c, "");
    }
    return 0;
}

std::string verdict_line(const Verdict& v, const std::string& params) { return v.report(params) + "\n"; }

int cmd_simulability(const RunConfig& c, std::ostream& out) {
    c.noise.validate();
    const std::string params = c.noise.describe();
    std::string rep = "s_bar=" + sci(detector_order_threshold(c.noise)) + "\n";
    if (c.tbar) rep += verdict_line(uniform_threshold_verdict(c.noise, *c.tbar), params + ",tbar=" + format_real(*c.tbar));
    if (c.r) {
        const double tb = std::exp(-2.0 * *c.r);
        Verdict sq = uniform_threshold_verdict(c.noise, tb);
        sq.inequality = "uniform_squeezed";
        rep += verdict_line(sq, params + ",r=" + format_real(*c.r));
        rep += verdict_line(gbs_qi_verdict(c.noise, *c.r, c.modes, c.eps),
                            params + ",r=" + format_real(*c.r) + ",modes=" + std::to_string(c.modes) +
                                ",eps=" + format_real(c.eps));
    }
    rep += verdict_line(thermal_threshold_verdict(c.noise), params);
    out << rep;
    if (!c.out.empty()) {
        write_atomic(c.out, rep);
        write_sidecar(c, "");
    }
    return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    c.noise.validate();
    const int n = c.sweep_points;
    struct Linear {
        std::string id;
        double tbar;
    };
    std::vector<Linear> uniform;
    if (c.tbar) {
        uniform.push_back({"uniform_threshold", *c.tbar});
    } else {
        uniform.push_back({"uniform_coherent", 1.0});
        if (c.r) uniform.push_back({"uniform_squeezed", std::exp(-2.0 * *c.r)});
        uniform.push_back({"uniform_kerr", -1.0});
    }
    std::string csv = "eta_L,eta_D,p_D,nbar,inequality,margin,simulable\n";
    std::string boundary = "inequality,eta_L,eta_D,nbar,p_D_boundary\n";
    auto row = [&](const NoiseParams& p, const std::string& id, const Verdict& v) {
        csv += sci(p.eta_L) + ',' + sci(p.eta_D) + ',' + sci(p.p_D) + ',' + sci(p.nbar) + ',' + id + ',' + sci(v.margin) +
               ',' + (v.simulable ? "true" : "false") + '\n';
    };
    for (int i = 0; i < n; ++i) {
        NoiseParams p = c.noise;
        p.eta_L = static_cast<double>(i) / (n - 1);
        for (int j = 0; j < n; ++j) {
            p.p_D = static_cast<double>(j) / (n - 1);
            for (const auto& u : uniform) row(p, u.id, uniform_threshold_verdict(p, u.tbar));
            row(p, "thermal_threshold", thermal_threshold_verdict(p));
            if (c.r) row(p, "gbs_qi", gbs_qi_verdict(p, *c.r, c.modes, c.eps));
        }
        // Linear inequalities vanish at a single dark-count probability.
        for (const auto& u : uniform) {
            boundary += u.id + ',' + sci(p.eta_L) + ',' + sci(p.eta_D) + ',' + sci(p.nbar) + ',' +
                        sci(p.eta_D * p.eta_L * (1.0 - u.tbar) / 2.0) + '\n';
        }
        boundary += "thermal_threshold," + sci(p.eta_L) + ',' + sci(p.eta_D) + ',' + sci(p.nbar) + ',' +
                    sci(p.eta_D * (p.eta_L - p.nbar * (1.0 - p.eta_L))) + '\n';
    }
    emit(c, csv, out);
    if (!c.out.empty()) {
        write_atomic(c.out + ".boundary.csv", boundary);
        write_sidecar(c, "");
        out << "rows=" << n * n * (uniform.size() + (c.r ? 2 : 1)) << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto checks = verification_suite();
    std::ostringstream rep;
    int failed = 0;
    for (const auto& k : checks) {
        rep << "check=" << k.name << " deviation=" << sci(k.deviation) << " tol=" << sci(k.tolerance)
            << " pass=" << (k.pass() ? "true" : "false") << "\n";
        if (!k.pass()) ++failed;
    }
    rep << "checks=" << checks.size() << " failed=" << failed << "\n";
    out << rep.str();
    if (!c.out.empty()) write_atomic(c.out, rep.str());
    if (failed > 0) {
        err << "error=VerificationFailed detail=" << failed << " of " << checks.size() << " checks failed\n";
        return 3;
    }
    return 0;
}

int cmd_estimate(const RunConfig& c, std::ostream& out) {
    const SuperpositionState st = require_state(c).to_superposition();
    c.noise.validate();
    const double t = c.t.value_or(-1.0);
    const double s = c.s.value_or(detector_order_threshold(c.noise));
    EstimatorOptions opts;
    opts.samples = c.samples;
    opts.seed = c.seed;
    opts.threads = c.threads > 0 ? c.threads : 1;
    opts.eps_neg = c.eps_neg;
    opts.quadrature = quadrature_of(c);
    const ClickEstimate e = estimate_click_probability(st, c.noise, t, s, opts);
    std::ostringstream rep;
    rep << "p_off=" << sci(e.p_off) << "\n"
        << "stderr=" << sci(e.std_error) << "\n"
        << "samples=" << e.samples << "\n"
        << "acceptance=" << sci(e.acceptance) << "\n"
        << "t=" << sci(t) << "\n"
        << "s=" << sci(s) << "\n"
        << "seed=" << c.seed << "\n";
    out << rep.str();
    if (!c.out.empty()) {
        write_atomic(c.out, rep.str());
        write_sidecar(c, "");
    }
    return 0;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
    switch (c.command) {
        case Command::Pqd: return cmd_pqd(c, out);
        case Command::Negativity: return cmd_negativity(c, out);
        case Command::Threshold: return cmd_threshold(c, out);
        case Command::Simulability: return cmd_simulability(c, out);
        case Command::Sweep: return cmd_sweep(c, out);
        case Command::Verify: return cmd_verify(c, out, err);
        case Command::Estimate: return cmd_estimate(c, out);
    }
    return 2;
}

std::string one_line(std::string s) {
    for (char& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

template <class F>
int guarded(F&& f, std::ostream& err) {
    try {
        return f();
    } catch (const Error& e) {
        err << "error=" << e.code() << " detail=" << one_line(e.what()) << "\n";
        return e.numerical() ? 3 : 2;
    } catch (const std::exception& e) {
        err << "error=InternalError detail=" << one_line(e.what()) << "\n";
        return 3;
    }
}

}  // namespace

const char* command_name(Command c) {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (const auto& [cmd, n] : kCommands) {
        if (name == n) return cmd;
    }
    throw InvalidArgument("unknown command '" + name + "'");
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k{
        "command", "state",  "t",     "t-min",   "t-max",   "t-points", "eta-l",  "eta-d",
        "p-d",     "nbar",   "tbar",  "s",       "r",       "modes",    "eps",    "grid-r",
        "grid-n",  "eps-neg", "tol-t", "samples", "seed",   "sweep-points", "threads", "out"};
    return k;
}

RunConfig RunConfig::from_key_values(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "command") c.command = parse_command(value);
        else if (key == "state") c.state = StateDescription::parse(value);
        else if (key == "t") c.t = parse_real(key, value);
        else if (key == "t-min") c.t_min = parse_real(key, value);
        else if (key == "t-max") c.t_max = parse_real(key, value);
        else if (key == "t-points") c.t_points = parse_int(key, value);
        else if (key == "eta-l") c.noise.eta_L = parse_real(key, value);
        else if (key == "eta-d") c.noise.eta_D = parse_real(key, value);
        else if (key == "p-d") c.noise.p_D = parse_real(key, value);
        else if (key == "nbar") c.noise.nbar = parse_real(key, value);
        else if (key == "tbar") c.tbar = parse_real(key, value);
        else if (key == "s") c.s = parse_real(key, value);
        else if (key == "r") c.r = parse_real(key, value);
        else if (key == "modes") c.modes = parse_int(key, value);
        else if (key == "eps") c.eps = parse_real(key, value);
        else if (key == "grid-r") c.grid_r = parse_real(key, value);
        else if (key == "grid-n") c.grid_n = parse_int(key, value);
        else if (key == "eps-neg") c.eps_neg = parse_real(key, value);
        else if (key == "tol-t") c.tol_t = parse_real(key, value);
        else if (key == "samples") c.samples = parse_u64(key, value);
        else if (key == "seed") c.seed = parse_u64(key, value);
        else if (key == "sweep-points") c.sweep_points = parse_int(key, value);
        else if (key == "threads") c.threads = parse_int(key, value);
        else if (key == "out") c.out = value;
        else throw InvalidArgument("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

void RunConfig::validate() const {
    noise.validate();
    if (t_points < 2) throw InvalidArgument("t-points must be >= 2");
    if (!(t_min < t_max)) throw InvalidArgument("t-min must be < t-max");
    if (grid_r < 0.0) throw InvalidArgument("grid-r must be >= 0");
    if (grid_n < 2) throw InvalidArgument("grid-n must be >= 2");
    if (!(eps_neg > 0.0)) throw InvalidArgument("eps-neg must be > 0");
    if (!(tol_t > 0.0)) throw InvalidArgument("tol-t must be > 0");
    if (samples < 2) throw InvalidArgument("samples must be >= 2");
    if (modes < 1) throw InvalidArgument("modes must be >= 1");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
    if (r && *r < 0.0) throw InvalidArgument("r must be >= 0");
    if (sweep_points < 2) throw InvalidArgument("sweep-points must be >= 2");
    if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

std::string RunConfig::echo() const {
    std::ostringstream os;
    os << "command=" << command_name(command) << "\n";
    if (state) os << "state=" << state->to_string() << "\n";
    if (t) os << "t=" << format_real(*t) << "\n";
    os << "t-min=" << format_real(t_min) << "\n"
       << "t-max=" << format_real(t_max) << "\n"
       << "t-points=" << t_points << "\n"
       << "eta-l=" << format_real(noise.eta_L) << "\n"
       << "eta-d=" << format_real(noise.eta_D) << "\n"
       << "p-d=" << format_real(noise.p_D) << "\n"
       << "nbar=" << format_real(noise.nbar) << "\n";
    if (tbar) os << "tbar=" << format_real(*tbar) << "\n";
    if (s) os << "s=" << format_real(*s) << "\n";
    if (r) os << "r=" << format_real(*r) << "\n";
    os << "modes=" << modes << "\n"
       << "eps=" << format_real(eps) << "\n"
       << "grid-r=" << format_real(grid_r) << "\n"
       << "grid-n=" << grid_n << "\n"
       << "eps-neg=" << format_real(eps_neg) << "\n"
       << "tol-t=" << format_real(tol_t) << "\n"
       << "samples=" << samples << "\n"
       << "seed=" << seed << "\n"
       << "sweep-points=" << sweep_points << "\n"
       << "threads=" << threads << "\n";
    if (!out.empty()) os << "out=" << out << "\n";
    return os.str();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InvalidArgument("cannot open '" + tmp + "' for writing");
        f << content;
        f.flush();
        if (!f) throw InvalidArgument("failed writing '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw InvalidArgument("cannot rename output into '" + path + "'");
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            config.validate();
            return dispatch(config, out, err);
        },
        err);
}

int run(const std::map<std::string, std::string>& kv, std::ostream& out, std::ostream& err) {
    return guarded([&] { return dispatch(RunConfig::from_key_values(kv), out, err); }, err);
}

}  // namespace kerrpqd
