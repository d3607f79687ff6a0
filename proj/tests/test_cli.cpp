#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("RECT_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + cli() + " " + args +
                            " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path p;
    TempDir() : p(fs::temp_directory_path() / "rect_cli_test") {
        fs::remove_all(p);
        fs::create_directories(p);
    }
    std::string operator/(const std::string& s) const { return (p / s).string(); }
};

}  // namespace

TEST_CASE("generate: kinds, exit codes, determinism") {
    TempDir td;
    CHECK(run("generate --kind cantor4 --depth 4 --out " + td / "c.csv") == 0);
    CHECK(fs::exists(td / "c.csv"));
    CHECK(fs::exists(td / "c.json"));
    // 4^4 = 256 points + header
    int lines = 0;
    {
        std::ifstream in(td / "c.csv");
        std::string l;
        while (std::getline(in, l)) ++lines;
    }
    CHECK(lines == 257);

    CHECK(run("generate --kind nonsense --out " + td / "x.csv") == 2);

    CHECK(run("generate --kind circle --R 1 --samples 20000 --out " + td / "a.csv") == 0);
    CHECK(run("generate --kind circle --R 1 --samples 20000 --out " + td / "b.csv") == 0);
    CHECK(slurp(td / "a.csv") == slurp(td / "b.csv"));
    CHECK(slurp(td / "a.json") == slurp(td / "b.json"));
}

TEST_CASE("analyze: outputs, determinism, resolution exit code") {
    TempDir td;
    REQUIRE(run("generate --kind cantor4 --depth 6 --out " + td / "c.csv") == 0);
    const std::string common = "analyze --measure " + td / "c.csv" +
                               " --octaves 6 --m 4 --eval random --eval-k 80 --seed 3";
    CHECK(run(common + " --outdir " + td / "out1") == 0);
    CHECK(run(common + " --outdir " + td / "out2") == 0);
    for (const std::string f : {"profile.csv", "sqfn.csv", "verdicts.csv", "report.json"}) {
        CHECK(fs::exists(td / ("out1/" + f)));
        CHECK(slurp(td / ("out1/" + f)) == slurp(td / ("out2/" + f)));
    }
    // headers per the interface contracts
    CHECK(slurp(td / "out1/profile.csv").rfind("point_id,r,theta,delta,smoothed_delta\n", 0) == 0);
    CHECK(slurp(td / "out1/sqfn.csv").rfind("point_id,s2,slope,theta_lo,theta_hi,boundary\n", 0) ==
          0);

    // a measure too coarse for the requested grid surfaces the conflict as exit 4
    REQUIRE(run("generate --kind plane --n 1 --d 2 --L 1 --s 0.2 --out " + td / "p.csv") == 0);
    CHECK(run("analyze --measure " + td / "p.csv" + " --outdir " + td / "pout") == 4);

    // config file with flag override
    {
        std::ofstream os(td / "run.cfg");
        os << "octaves = 5\neval = random\neval_k = 40\nseed = 9\n";
    }
    CHECK(run("analyze --measure " + td / "c.csv" + " --config " + td / "run.cfg" +
              " --outdir " + td / "out3") == 0);
    CHECK(run("analyze --measure " + td / "c.csv" + " --config " + td / "run.cfg" +
              " --eval-k 50 --outdir " + td / "out4") == 0);
    // different eval_k -> different verdict row counts
    CHECK(slurp(td / "out3/verdicts.csv") != slurp(td / "out4/verdicts.csv"));
}

TEST_CASE("outputs are invariant under the worker count") {
    TempDir td;
    REQUIRE(run("generate --kind cantor4 --depth 6 --out " + td / "c.csv") == 0);
    const std::string common = "analyze --measure " + td / "c.csv" +
                               " --octaves 6 --eval random --eval-k 60 --seed 2 --outdir ";
    CHECK(run(common + td / "serial", "RECT_THREADS=1") == 0);
    CHECK(run(common + td / "parallel", "RECT_THREADS=7") == 0);
    for (const std::string f : {"profile.csv", "sqfn.csv", "verdicts.csv", "report.json"})
        CHECK(slurp(td / ("serial/" + f)) == slurp(td / ("parallel/" + f)));
}

TEST_CASE("negative paths exit with the validation code") {
    TempDir td;
    REQUIRE(run("generate --kind cantor4 --depth 4 --out " + td / "c.csv") == 0);
    CHECK(run("blowup --measure " + td / "c.csv" +
              " --point-id 99999 --radii 0.25 --out " + td / "t.csv") == 2);
    CHECK(run("report --verdicts " + td / "missing.csv" + " --out " + td / "r.json") == 2);
    CHECK(run("analyze --measure " + td / "missing.csv" + " --outdir " + td / "o") == 2);
}

TEST_CASE("czdemo and blowup and report") {
    TempDir td;
    REQUIRE(run("generate --kind plane --n 1 --d 2 --L 2 --s 0.01 --out " + td / "mu.csv") == 0);
    // signed nu: a few heavy atoms on the grid
    {
        std::ofstream os(td / "nu.csv");
        os << "x0,x1,w\n0.25,0,5\n0.5,0,-4\n1.25,0,6\n";
        std::ofstream ms(td / "nu.json");
        ms << "{\"d\":2,\"n\":1,\"h\":0.01,\"generator\":\"signed\",\"params\":{}}";
    }
    CHECK(run("czdemo --nu " + td / "nu.csv" + " --mu " + td / "mu.csv" +
              " --lambda 120 --out " + td / "audit.json") == 0);
    const std::string audit = slurp(td / "audit.json");
    CHECK(audit.find("\"all_pass\": true") != std::string::npos);

    // lambda below the hypothesis bound -> validation exit
    CHECK(run("czdemo --nu " + td / "nu.csv" + " --mu " + td / "mu.csv" +
              " --lambda 0.001 --out " + td / "audit2.json") == 2);

    REQUIRE(run("generate --kind cantor4 --depth 7 --out " + td / "c.csv") == 0);
    CHECK(run("blowup --measure " + td / "c.csv" +
              " --point-id 0 --radii 0.25,0.0625,0.015625 --out " + td / "trace.csv" +
              " --svg " + td / "trace.svg") == 0);
    CHECK(slurp(td / "trace.csv").rfind("point_id,r,beta2,c_fit,max_rel_dev\n", 0) == 0);
    CHECK(slurp(td / "trace.svg").find("<svg") != std::string::npos);
    CHECK(slurp(td / "trace.svg").find("polyline") != std::string::npos);

    REQUIRE(run("analyze --measure " + td / "c.csv" +
                " --octaves 6 --eval random --eval-k 50 --outdir " + td / "out") == 0);
    CHECK(run("report --verdicts " + td / "out/verdicts.csv" + " --out " + td / "rep.json") == 0);
    CHECK(slurp(td / "rep.json").find("fractions") != std::string::npos);
}
