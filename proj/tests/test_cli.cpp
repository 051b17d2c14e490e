// Exercises the installed CLI binary end to end: exit codes, JSON reports,
// SVG output, determinism. argv[1] = binary path, argv[2] = data directory.

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

struct Run {
    int code;
    std::string out, err;
};

std::string bin, data;

Run run(const std::string& args) {
    std::string cmd = "'" + bin + "' " + args + " >cli_out.txt 2>cli_err.txt";
    int rc = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp("cli_out.txt");
    r.err = slurp("cli_err.txt");
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <binary> <data-dir>\n";
        return 2;
    }
    bin = argv[1];
    data = argv[2];
    const std::string square = "'" + data + "/square.poly'";
    const std::string triangle = "'" + data + "/triangle.poly'";

    {
        auto r = run("simulate --polygon " + square + " --pos 1/2,1/2 --dir 1:0");
        check(r.code == 0, "simulate exits 0: got " + std::to_string(r.code) + " " + r.err);
        auto j = json::parse(r.out);
        check(j["command"] == "simulate", "simulate command tag");
        check(j["backend"] == "exact", "default backend is exact");
        check(j["orbit"]["periodic"]["links"] == 2, "bouncer period 2");
        // initial half-link from the interior start plus the 2-link period
        check(j["orbit"]["links"].size() == 3, "bouncer traces 3 links");
        check(j["orbit"]["links"][0]["b"]["x"]["exact"] == "1", "exact hit coordinate");
    }
    {
        // identical invocations produce identical reports
        auto a = run("simulate --polygon " + square + " --pos 1/3,1/5 --dir 2:3 --links 25");
        auto b = run("simulate --polygon " + square + " --pos 1/3,1/5 --dir 2:3 --links 25");
        check(a.code == 0 && a.out == b.out, "deterministic JSON output");
    }
    {
        auto r = run("simulate --backend float --polygon " + square +
                     " --pos 0.5,0.5 --dir 0.9272952180016122");
        check(r.code == 0, "float backend with radian direction");
        auto j = json::parse(r.out);
        check(j["backend"] == "float", "float backend tag");
        check(j["orbit"]["links"][0]["b"]["x"]["exact"].is_null(), "float scalars carry no fraction");
    }
    {
        auto r = run("simulate --polygon " + square + " --pos 1/2,1/2 --dir \"1/4 pi\"");
        check(r.code == 0, "exact quarter-pi direction accepted");
        auto j = json::parse(r.out);
        check(j["orbit"]["periodic"]["links"] == 2, "diagonal retroreflects with period 2");
        auto bad = run("simulate --polygon " + square + " --pos 1/2,1/2 --dir \"1/3 pi\"");
        check(bad.code == 2, "exact backend rejects pi/3 direction");
    }
    {
        auto r = run("simulate --polygon " + square + " --pos 1/2,1/2 --dir 1:0 --svg cli_t.svg " +
                     "--json cli_t.json");
        check(r.code == 0, "svg+json run exits 0");
        auto svg = slurp("cli_t.svg");
        check(svg.find("<svg") != std::string::npos, "svg has root element");
        check(svg.find("</svg>") != std::string::npos, "svg is closed");
        check(!json::parse(slurp("cli_t.json")).is_null(), "json file parses");
        std::remove("cli_t.svg");
        std::remove("cli_t.json");
    }
    {
        auto r = run("unfold --polygon " + square + " --pos 1/3,1/5 --dir 2:3 --copies 10");
        check(r.code == 0, "unfold exits 0");
        auto j = json::parse(r.out);
        check(j["residual"] == 0.0, "exact unfolding has zero residual");
        check(j["copies"].get<int>() >= 1, "unfold reports copies");
    }
    {
        auto r = run("diagonals --polygon " + square + " --max-links 3");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["count"] == 10, "square has 10 diagonals up to length 3");
    }
    {
        auto r = run("periodic --polygon " + square + " --max-word 4");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["cylinders"].size() == 3, "square cylinders up to word 4");
    }
    {
        auto r = run("perp --polygon " + square + " --side 0 --samples 20 --max-links 50");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["periodic"] == 20 && j["undecided"] == 0,
              "perp scan of the square bottom side");
    }
    {
        auto r = run("welldist --polygon " + square + " --pos 1/2,1/2 --dir 0:1 --eps 0.6");
        auto j = json::parse(r.out);
        check(r.code == 0, "welldist exits 0");
        double sup = j["sup_discrepancy"].get<double>();
        check(std::abs(sup - 0.19634954084936207) < 1e-9, "bouncer sup discrepancy pi/16");
        check(j["well_distributed"] == true, "bouncer is 0.6-well-distributed");
    }
    {
        auto r = run("density --polygon " + square + " --pos 1/2,1/2 --dir 1:0 --eps 0.3");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["dense"] == false && !j["uncovered_witness"].is_null(),
              "bouncer is not 0.3-dense");
    }
    {
        auto r = run("lshape --k 3");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["links"] == 8 && j["periodic"] == true &&
                  j["avoids_right_square"] == true,
              "lshape k=3 gives the 8-link orbit");
    }
    {
        auto r = run("scan --polygon " + square +
                     " --theta 1.0 --delta 0.05 --eps 0.3 --grid 4 --budget 100000");
        auto j = json::parse(r.out);
        check(r.code == 0 && j["coverage_fraction"] == 1.0, "A-set scan covers the grid");
    }

    // failure modes
    check(run("simulate --polygon missing.poly --pos 1/2,1/2 --dir 1:0").code == 3,
          "missing polygon file exits 3");
    check(run("simulate --polygon '" + data + "/repeated.poly' --pos 1/2,1/2 --dir 1:0").code == 3,
          "invalid polygon exits 3");
    check(run("simulate --polygon '" + data + "/too_few.poly' --pos 1/2,1/2 --dir 1:0").code == 3,
          "two-vertex polygon exits 3");
    check(run("simulate --polygon " + square + " --pos 5,5 --dir 1:0").code == 4,
          "start outside the polygon exits 4");
    check(run("simulate --polygon " + square + " --pos 1/2,1/2 --dir 0:0").code == 2,
          "zero direction exits 2");
    check(run("simulate --polygon " + square + " --pos nonsense --dir 1:0").code == 2,
          "bad position exits 2");
    check(run("simulate --polygon " + square + " --pos 1/2,1/2 --dir 1.23").code == 2,
          "raw radians rejected by the exact backend");
    check(run("bogus-subcommand").code == 2, "unknown subcommand exits 2");
    check(run("simulate").code == 2, "missing required options exit 2");
    check(run("perp --polygon " + triangle + " --side 9 --samples 5").code == 2,
          "side index out of range exits 2");

    if (failures == 0) std::cout << "test_cli: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
