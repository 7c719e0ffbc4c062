#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string symx_bin() {
    const char* bin = std::getenv("SYMX_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SYMX_BIN must point at the symx binary");
    return bin;
}

RunResult run(const std::string& args) {
    const std::string cmd = symx_bin() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json first_line_json(const std::string& out) {
    const auto nl = out.find('\n');
    return json::parse(out.substr(0, nl));
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("symx_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
}

} // namespace

TEST_CASE("check command exit codes and verdict payloads") {
    TempDir dir;
    write_file(dir.file("paper.csv"), "0,-3,1\n-6,0,4\n5,10,0");
    const auto ok = run("check " + dir.file("paper.csv"));
    CHECK(ok.exit_code == 0);
    const json report = first_line_json(ok.out);
    CHECK(report.at("tool_version") == "0.1.0");
    CHECK(report.at("command") == "check");
    CHECK(report.at("pass") == true);
    CHECK(report.at("verdict").at("symmetrizer") == json::array({"5", "5/2", "1"}));

    write_file(dir.file("flip.csv"), "0,-3,1\n-6,0,4\n5,-10,0");
    const auto bad = run("check " + dir.file("flip.csv"));
    CHECK(bad.exit_code == 1);
    const json badrep = first_line_json(bad.out);
    CHECK(badrep.at("verdict").at("status") == "sign_violation");
    CHECK(badrep.at("verdict").at("witness").at("i") == 2);
    CHECK(badrep.at("verdict").at("witness").at("j") == 3);

    write_file(dir.file("bad.csv"), "1,2\n3,oops");
    CHECK(run("check " + dir.file("bad.csv")).exit_code == 2);
    CHECK(run("check " + dir.file("missing.csv")).exit_code == 2);
}

TEST_CASE("eig command prints the spectrum and certificates") {
    TempDir dir;
    write_file(dir.file("two.csv"), "0,2\n1,0");
    const auto r = run("eig " + dir.file("two.csv"));
    CHECK(r.exit_code == 0);
    const json report = first_line_json(r.out);
    const auto values = report.at("spectrum").at("values").get<std::vector<double>>();
    REQUIRE(values.size() == 2);
    CHECK(values[0] == doctest::Approx(-1.4142135623730951).epsilon(1e-12));
    CHECK(values[1] == doctest::Approx(1.4142135623730951).epsilon(1e-12));

    write_file(dir.file("paper.csv"), "0,-3,1\n-6,0,4\n5,10,0");
    const auto certified =
        run("eig " + dir.file("paper.csv") + " --certify-interlacing --certify-alternation");
    CHECK(certified.exit_code == 0);
    const json crep = first_line_json(certified.out);
    REQUIRE(crep.at("interlacing").size() == 3);
    REQUIRE(crep.at("alternation").size() == 3);
    for (const auto& cert : crep.at("interlacing")) CHECK(cert.at("pass") == true);
    for (const auto& cert : crep.at("alternation")) CHECK(cert.at("pass") == true);

    write_file(dir.file("tri.csv"), "2,1,0\n1,2,1\n0,1,2");
    const auto tri = run("eig " + dir.file("tri.csv") + " --certify-interlacing --certify-alternation");
    CHECK(tri.exit_code == 0);
    const json trep = first_line_json(tri.out);
    for (const auto& cert : trep.at("interlacing")) CHECK(cert.at("pass") == true);
    for (const auto& cert : trep.at("alternation")) CHECK(cert.at("pass") == true);

    write_file(dir.file("cycle.csv"), "0,1,1\n1,0,1\n2,1,0");
    const auto nonsym = run("eig " + dir.file("cycle.csv"));
    CHECK(nonsym.exit_code == 1);
    CHECK(first_line_json(nonsym.out).at("verdict").at("status") == "cycle_violation");
}

TEST_CASE("det command methods and order guard") {
    TempDir dir;
    write_file(dir.file("m.csv"), "1,2,3\n4,5,6\n7,8,10");
    const auto dodgson = run("det " + dir.file("m.csv") + " --method dodgson");
    CHECK(dodgson.exit_code == 0);
    const json rep = first_line_json(dodgson.out);
    CHECK(rep.at("determinant") == "-3");
    CHECK(rep.at("fallback") == false);

    write_file(dir.file("z.csv"), "1,1,1\n1,0,1\n1,1,2");
    const json zrep = first_line_json(run("det " + dir.file("z.csv") + " --method dodgson").out);
    CHECK(zrep.at("determinant") == "-1");
    CHECK(zrep.at("fallback") == true);

    CHECK(first_line_json(run("det " + dir.file("m.csv") + " --method bareiss").out)
              .at("determinant") == "-3");
    CHECK(first_line_json(run("det " + dir.file("m.csv") + " --method cofactor").out)
              .at("determinant") == "-3");

    std::string nine;
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) nine += (j ? "," : "") + std::to_string(i == j ? 1 : 0);
        nine += "\n";
    }
    write_file(dir.file("nine.csv"), nine);
    CHECK(run("det " + dir.file("nine.csv") + " --method cofactor").exit_code == 2);
}

TEST_CASE("verify command aggregates residuals") {
    CHECK(run("verify --identity dodgson --trials 20 --n 5 --seed 7").exit_code == 0);
    TempDir dir;
    write_file(dir.file("paper.csv"), "0,-3,1\n-6,0,4\n5,10,0");
    const auto lemma = run("verify " + dir.file("paper.csv") + " --identity lemma --trials 10");
    CHECK(lemma.exit_code == 0);
    CHECK(first_line_json(lemma.out).at("max_residual") == "0");

    write_file(dir.file("cycle.csv"), "0,1,1\n1,0,1\n2,1,0");
    const auto broken = run("verify " + dir.file("cycle.csv") + " --identity lemma --trials 8");
    CHECK(broken.exit_code == 1);
    CHECK(first_line_json(broken.out).at("max_residual") != "0");

    CHECK(run("verify --identity nonsense --trials 1 2>/dev/null").exit_code == 2);
    CHECK(run("verify --identity minors --trials 4 --n 5 --seed 3").exit_code == 0);
    CHECK(run("verify --identity altern --trials 4 --n 5 --seed 3").exit_code == 0);
}

TEST_CASE("gen command writes files, sidecars, and honors the seed env") {
    TempDir dir;
    const std::string out = dir.file("g.csv");
    const auto gen = run("gen --n 5 --pattern dense --seed 7 --out " + out + " --format csv");
    CHECK(gen.exit_code == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(out + ".json"));
    CHECK(run("check " + out).exit_code == 0);

    std::ifstream sidecar(out + ".json");
    json spec = json::parse(sidecar);
    CHECK(spec.at("seed") == 7);
    CHECK(spec.at("pattern") == "dense");

    // Same spec regenerates the identical file.
    const std::string again = dir.file("g2.csv");
    run("gen --n 5 --pattern dense --seed 7 --out " + again + " --format csv");
    std::ifstream f1(out), f2(again);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);

    const std::string violated = dir.file("v.csv");
    CHECK(run("gen --n 4 --seed 3 --violation signflip --out " + violated + " --format csv")
              .exit_code == 0);
    CHECK(run("check " + violated).exit_code == 1);

    CHECK(run("gen --n 6 --pattern banded:1 --violation cyclebreak --out " + dir.file("x.csv"))
              .exit_code == 2);

    // SYMX_SEED wins over --seed.
    const std::string enved = dir.file("e.csv");
    const std::string cmd = "SYMX_SEED=42 " + symx_bin() + " gen --n 4 --seed 7 --out " + enved +
                            " --format csv > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream es(enved + ".json");
    CHECK(json::parse(es).at("seed") == 42);
}

TEST_CASE("batch directories process in name order") {
    TempDir dir;
    fs::create_directories(dir.file("batch"));
    write_file(dir.file("batch/a.csv"), "0,2\n1,0");
    write_file(dir.file("batch/b.csv"), "0,-3,1\n-6,0,4\n5,10,0");
    const auto all = run("check " + dir.file("batch"));
    CHECK(all.exit_code == 0);
    // One JSON line per file, inputs in name order.
    std::vector<std::string> inputs;
    std::istringstream ss(all.out);
    std::string line;
    while (std::getline(ss, line)) inputs.push_back(json::parse(line).at("input"));
    REQUIRE(inputs.size() == 2);
    CHECK(inputs[0] < inputs[1]);

    write_file(dir.file("batch/c.csv"), "0,1\n-1,0");
    CHECK(run("check " + dir.file("batch")).exit_code == 1);
    write_file(dir.file("batch/d.csv"), "1,2\n3");
    CHECK(run("check " + dir.file("batch")).exit_code == 2);
}

TEST_CASE("interlace and symmetrize commands") {
    TempDir dir;
    write_file(dir.file("tri.csv"), "2,1,0\n1,2,1\n0,1,2");
    const auto inter = run("interlace " + dir.file("tri.csv"));
    CHECK(inter.exit_code == 0);
    CHECK(first_line_json(inter.out).at("interlacing").size() == 3);

    write_file(dir.file("two.csv"), "0,2\n1,0");
    const auto symm = run("symmetrize " + dir.file("two.csv") + " --out " + dir.file("t.mtx"));
    CHECK(symm.exit_code == 0);
    const json srep = first_line_json(symm.out);
    CHECK(srep.at("verdict").at("symmetrizer") == json::array({"1", "2"}));
    const auto t = srep.at("symmetrized");
    CHECK(t[0][1].get<double>() == doctest::Approx(1.4142135623730951).epsilon(1e-12));
    CHECK(t[1][0].get<double>() == doctest::Approx(1.4142135623730951).epsilon(1e-12));
    CHECK(fs::exists(dir.file("t.mtx")));

    write_file(dir.file("flip.csv"), "0,1\n-1,0");
    CHECK(run("symmetrize " + dir.file("flip.csv")).exit_code == 1);
}
