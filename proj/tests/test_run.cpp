#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kerrpqd/errors.hpp"
#include "kerrpqd/run.hpp"

using namespace kerrpqd;

namespace {

const char* const kCat = "kind=squeeze_kerr_coherent m=3 alpha_re=1 alpha_im=0 r=0.2";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::map<std::string, std::string>& kv) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(kv, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "kerrpqd_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("state descriptions") {
    const StateDescription d = StateDescription::parse(kCat);
    CHECK(d.kind == StateDescription::Kind::SqueezeKerrCoherent);
    CHECK(d.m == 3);
    CHECK(d.alpha == cplx(1.0, 0.0));
    CHECK(d.r == 0.2);
    CHECK(StateDescription::parse(d.to_string()).to_string() == d.to_string());

    StateDescription odd;
    odd.kind = StateDescription::Kind::KerrCoherent;
    odd.m = 5;
    odd.alpha = cplx(0.1, -1.0 / 3.0);
    const StateDescription back = StateDescription::parse(odd.to_string());
    CHECK(back.alpha == odd.alpha);

    CHECK_THROWS_AS(StateDescription::parse("kind=coherent alpha_re=1 bogus=2"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=coherent r=0.5"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=kerr_coherent alpha_re=1"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=squeezed_vacuum r=-0.1"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=cat"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=coherent alpha_re=1x"), InvalidArgument);
    CHECK_THROWS_AS(StateDescription::parse("kind=coherent alpha_re=1 alpha_re=2"), InvalidArgument);

    CHECK(StateDescription::parse("kind=kerr_squeezed_vacuum m=3 r=1").to_superposition().size() == 3);
}

TEST_CASE("run configuration") {
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(RunConfig::from_key_values({{"command", "verify"}, {"colour", "red"}}), InvalidArgument);
        CHECK_THROWS_AS(RunConfig::from_key_values({{"command", "launch"}}), InvalidArgument);
    }
    SUBCASE("domain checks") {
        CHECK_THROWS_AS(RunConfig::from_key_values({{"command", "simulability"}, {"eta-l", "1.5"}}), InvalidArgument);
        CHECK_THROWS_AS(RunConfig::from_key_values({{"command", "negativity"}, {"t-points", "1"}}), InvalidArgument);
        CHECK_THROWS_AS(RunConfig::from_key_values({{"command", "estimate"}, {"samples", "-3"}}), InvalidArgument);
    }
    SUBCASE("echo round-trips") {
        const RunConfig c = RunConfig::from_key_values({{"command", "estimate"},
                                                        {"state", kCat},
                                                        {"eta-l", "0.3"},
                                                        {"eta-d", "0.8"},
                                                        {"p-d", "0.252"},
                                                        {"t", "-1"},
                                                        {"seed", "99"},
                                                        {"out", "x.txt"}});
        std::map<std::string, std::string> kv;
        std::istringstream lines(c.echo());
        for (std::string line; std::getline(lines, line);) {
            const auto eq = line.find('=');
            REQUIRE(eq != std::string::npos);
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
        CHECK(RunConfig::from_key_values(kv).echo() == c.echo());
    }
    SUBCASE("config files") {
        const auto path = scratch("config.txt");
        std::ofstream(path) << "# comment\ncommand=threshold\n\nstate=" << kCat << "\ntol-t = 0.01\n";
        const auto kv = read_config_file(path.string());
        CHECK(kv.at("command") == "threshold");
        CHECK(kv.at("tol-t") == "0.01");
        CHECK(RunConfig::from_key_values(kv).tol_t == 0.01);

        std::ofstream(path) << "seed=1\nseed=2\n";
        CHECK_THROWS_AS(read_config_file(path.string()), InvalidArgument);
        std::ofstream(path) << "no equals sign\n";
        CHECK_THROWS_AS(read_config_file(path.string()), InvalidArgument);
        CHECK_THROWS_AS(read_config_file(scratch("missing.txt").string()), InvalidArgument);
    }
}

TEST_CASE("exit statuses") {
    const Outcome invalid = invoke({{"command", "pqd"}, {"state", "kind=coherent alpha_re=1 bogus=2"}});
    CHECK(invalid.code == 2);
    CHECK(invalid.err.rfind("error=InvalidArgument detail=", 0) == 0);

    const Outcome singular = invoke({{"command", "pqd"}, {"state", "kind=coherent alpha_re=1"}, {"t", "1"}});
    CHECK(singular.code == 3);
    CHECK(singular.err.rfind("error=NotIntegrable detail=", 0) == 0);

    const Outcome missing = invoke({{"command", "threshold"}});
    CHECK(missing.code == 2);

    const Outcome small_window = invoke({{"command", "pqd"}, {"state", "kind=coherent alpha_re=1"}, {"grid-r", "0.5"}});
    CHECK(small_window.code == 0);
}

TEST_CASE("simulability report") {
    const Outcome o =
        invoke({{"command", "simulability"}, {"eta-l", "0.9"}, {"eta-d", "0.8"}, {"p-d", "0.05"}, {"tbar", "-1"}});
    REQUIRE(o.code == 0);
    CHECK(o.out.find("s_bar=8.7500000000000000e-01") != std::string::npos);
    CHECK(o.out.find("inequality=uniform_threshold margin=-1.6750000000000000e+00 simulable=false") != std::string::npos);
    CHECK(o.out.find("inequality=thermal_threshold") != std::string::npos);
}

TEST_CASE("threshold report") {
    const Outcome o = invoke({{"command", "threshold"}, {"state", kCat}});
    REQUIRE(o.code == 0);
    CHECK(o.out.rfind("t_bar=-1.0000000000000000e+00\neps_neg=", 0) == 0);
    CHECK(o.out.find("tol_t=1.0000000000000000e-03") != std::string::npos);
}

TEST_CASE("artifacts") {
    SUBCASE("pqd export is deterministic and atomic") {
        const auto a = scratch("a.csv");
        const auto b = scratch("b.csv");
        for (const auto& p : {a, b}) {
            const Outcome o = invoke({{"command", "pqd"}, {"state", kCat}, {"grid-n", "21"}, {"out", p.string()}});
            REQUIRE(o.code == 0);
        }
        const std::string text = slurp(a);
        CHECK(text == slurp(b));
        CHECK(text.rfind("beta_re,beta_im,w\n", 0) == 0);
        std::size_t rows = 0;
        for (char ch : text) rows += ch == '\n';
        CHECK(rows == 1 + 21 * 21);
        CHECK_FALSE(std::filesystem::exists(a.string() + ".tmp"));

        const std::string meta = slurp(a.string() + ".meta");
        CHECK(meta.find("state=kind=squeeze_kerr_coherent") != std::string::npos);
        CHECK(meta.find("# norm_residual=") != std::string::npos);
        // The sidecar is itself a config file that reproduces the run.
        const auto kv = read_config_file(a.string() + ".meta");
        CHECK(RunConfig::from_key_values(kv).echo() == meta.substr(0, meta.find('#')));
        CHECK(kv.at("grid-n") == "21");
    }
    SUBCASE("negativity curve") {
        const Outcome o =
            invoke({{"command", "negativity"}, {"state", kCat}, {"t-min", "-1"}, {"t-max", "-0.5"}, {"t-points", "3"}});
        REQUIRE(o.code == 0);
        CHECK(o.out.rfind("t,negativity,err\n-1.0000000000000000e+00,", 0) == 0);
    }
    SUBCASE("sweep writes the grid and the boundaries") {
        const auto p = scratch("sweep.csv");
        const Outcome o = invoke({{"command", "sweep"},
                                  {"eta-d", "0.9"},
                                  {"tbar", "-1"},
                                  {"r", "0.5"},
                                  {"sweep-points", "4"},
                                  {"out", p.string()}});
        REQUIRE(o.code == 0);
        const std::string grid = slurp(p);
        CHECK(grid.rfind("eta_L,eta_D,p_D,nbar,inequality,margin,simulable\n", 0) == 0);
        const std::string boundary = slurp(p.string() + ".boundary.csv");
        CHECK(boundary.find("uniform_threshold,1.0000000000000000e+00,9.0000000000000002e-01,0.0000000000000000e+00,"
                            "9.0000000000000002e-01") != std::string::npos);
    }
    SUBCASE("estimate is seed-reproducible") {
        const std::map<std::string, std::string> kv{{"command", "estimate"}, {"state", kCat},   {"eta-l", "0.3"},
                                                    {"eta-d", "0.8"},        {"p-d", "0.252"}, {"samples", "5000"},
                                                    {"seed", "7"}};
        const Outcome a = invoke(kv);
        const Outcome b = invoke(kv);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.find("samples=5000") != std::string::npos);
    }
}

TEST_CASE("atomic writes") {
    const auto p = scratch("atomic.txt");
    write_atomic(p.string(), "first\n");
    write_atomic(p.string(), "second\n");
    CHECK(slurp(p) == "second\n");
    CHECK_THROWS_AS(write_atomic((scratch("no_such_dir") / "x" / "y.txt").string(), "z"), Error);
}
