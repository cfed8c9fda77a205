#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphblocks/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using morphblocks::Json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string data_file(const std::string& name) {
    return std::string(TESTDATA_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int serial = 0;
    std::string errfile = "/tmp/mbcli_stderr_" + std::to_string(serial++) + ".txt";
    std::string cmd = std::string(CLI_BIN) + " " + args + " 2>" + errfile;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(errfile);
    std::remove(errfile.c_str());
    return r;
}

std::string err_name(const RunResult& r) {
    return Json::parse(r.err).at("error").get<std::string>();
}

const std::string alternating_spec =
    R"({"alphabet":["d","e","a"],"rules":{"d":"dea","e":"eda","a":"aa"},"seed":"d"})";

} // namespace

TEST_CASE("gen prints the (coded) fixed point") {
    RunResult r = run_cli("gen --spec " + data_file("p2.json") + " --length 16 --concat");
    CHECK(r.code == 0);
    CHECK(r.out == "0110100010000000\n");

    r = run_cli("gen --spec " + data_file("p2.json") + " --length 8");
    CHECK(r.code == 0);
    CHECK(r.out == "0 1 1 0 1 0 0 0\n");

    r = run_cli("gen --spec " + data_file("tm.json") + " --length 16 --concat");
    CHECK(r.code == 0);
    CHECK(r.out == "0110100110010110\n");

    r = run_cli("gen --length 4");
    CHECK(r.code == 5);
    CHECK(err_name(r) == "InvalidParams");
}

TEST_CASE("error kinds map to distinct exit codes") {
    RunResult r = run_cli("gen --spec /nonexistent/word.json");
    CHECK(r.code == 2);
    CHECK(err_name(r) == "SpecNotFound");

    std::string bad = write_temp("mbcli_bad.json", "{]");
    r = run_cli("gen --spec " + bad);
    CHECK(r.code == 2);
    CHECK(err_name(r) == "SpecParse");

    std::string erasing = write_temp(
        "mbcli_erasing.json",
        R"({"alphabet":["a","b"],"rules":{"a":"ab","b":""},"seed":"a"})");
    r = run_cli("gen --spec " + erasing);
    CHECK(r.code == 2);
    CHECK(err_name(r) == "InvalidMorphism");

    r = run_cli("limsup --spec " + data_file("allzero.json") + " --delta 0");
    CHECK(r.code == 3);
    CHECK(err_name(r) == "InfiniteBlock");

    r = run_cli("blocks --spec " + data_file("allzero.json") + " --delta 0 --horizon 100000");
    CHECK(r.code == 3);
    CHECK(err_name(r) == "InfiniteBlock");

    std::string alt = write_temp("mbcli_alt.json", alternating_spec);
    r = run_cli("limsup --spec " + alt + " --delta a --mode exact --horizon 2000000");
    CHECK(r.code == 4);
    CHECK(err_name(r) == "HorizonExceeded");

    std::string identity = write_temp("mbcli_identity.json", "[[1,0],[0,1]]");
    r = run_cli("construct perron --matrix " + identity);
    CHECK(r.code == 5);
    CHECK(err_name(r) == "NotPerron");

    r = run_cli("construct rational --p 2 --q 2");
    CHECK(r.code == 5);
    CHECK(err_name(r) == "InvalidParams");

    r = run_cli("definitely-not-a-command");
    CHECK(r.code == 5);

    r = run_cli("");
    CHECK(r.code == 5);

    r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
}

TEST_CASE("blocks command reports maximal runs") {
    RunResult r = run_cli("blocks --spec " + data_file("p2.json") + " --delta 0 --count 5");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["kind"] == "delta");
    CHECK(j["count"] == 5);
    CHECK(j["blocks"][2]["k"] == 2);
    CHECK(j["blocks"][2]["i"] == 5);
    CHECK(j["blocks"][2]["j"] == 7);
    CHECK(j["blocks"][2]["len"] == 3);
    CHECK(!j["blocks"][2].contains("phase"));

    r = run_cli("blocks --raw 0100111010101000 --x 01");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["kind"] == "pattern");
    CHECK(j["count"] == 3);
    CHECK(j["blocks"][0]["i"] == 0);
    CHECK(j["blocks"][0]["j"] == 2);
    CHECK(j["blocks"][0]["phase"] == 0);
    CHECK(j["blocks"][2]["i"] == 6);
    CHECK(j["blocks"][2]["j"] == 13);
    CHECK(j["blocks"][2]["phase"] == 1);
    CHECK(j["ratios"]["max"] == "13/6");

    // a finite raw word closes its last run at the end of the data
    r = run_cli("blocks --raw 0100 --delta 0");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["blocks"][0]["i"] == 0);
    CHECK(j["blocks"][0]["j"] == 0);
    CHECK(j["blocks"][1]["i"] == 2);
    CHECK(j["blocks"][1]["j"] == 3);

    r = run_cli("blocks --raw 0100 --delta 0 --x 01");
    CHECK(r.code == 5);
    r = run_cli("blocks --raw 0100");
    CHECK(r.code == 5);

    r = run_cli("--format text blocks --raw 0100 --delta 0");
    CHECK(r.code == 0);
    CHECK(r.out == "0\t(0,0)\tlen 1\n1\t(2,3)\tlen 2\nmax ratio 3/2\n");
}

TEST_CASE("limsup command routes and formats") {
    RunResult r = run_cli("limsup --spec " + data_file("p2.json") + " --delta 0 --horizon 2000000");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["value"]["kind"] == "rational");
    CHECK(j["value"]["value"] == "2");
    CHECK(j["value"]["decimal"] == "2");
    CHECK(j["method"] == "uniform-closed-form");
    CHECK(j["classification"] == "rational");
    CHECK(j["degree_bound"] == 1);
    CHECK(j["normalize_exponent"] == 2);
    REQUIRE(j["chains"].size() == 2);
    CHECK(j["chains"][0]["root"][0] == 33);
    CHECK(j["chains"][0]["root"][1] == 63);
    CHECK(j["chains"][0]["ratio_bound"] == "2");
    CHECK(j["chains"][0]["cycle"]["period"] == 1);
    CHECK(j["chains"][1]["root"][0] == 65);
    CHECK(j["blocks_scanned"].get<long long>() > 0);
    CHECK(!j.contains("note"));

    r = run_cli("limsup --spec " + data_file("fib.json") + " --delta 0");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["method"] == "bounded");
    CHECK(j["classification"] == "rational");
    CHECK(j["value"]["value"] == "1");
    CHECK(j["note"] == "run lengths stay bounded while positions grow");

    r = run_cli("limsup --spec " + data_file("p2.json") +
                " --delta 0 --mode empirical --horizon 2000000");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["method"] == "empirical");
    CHECK(j["classification"] == "estimate-only");
    CHECK(j["value"]["kind"] == "estimate");
    CHECK(j["chains"].empty());
    CHECK(std::abs(std::stod(j["value"]["decimal"].get<std::string>()) - 2.0) <= 0.01);

    r = run_cli("--format text limsup --spec " + data_file("p2.json") +
                " --delta 0 --horizon 2000000");
    CHECK(r.code == 0);
    CHECK(r.out == "value 2 method uniform-closed-form classification rational\n");
}

TEST_CASE("construct command emits marker layouts") {
    RunResult r = run_cli("construct perron --mu 2 --count 8");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["kind"] == "perron");
    CHECK(j["target"] == "2");
    CHECK(j["target_exact"] == true);
    CHECK(j["ones"] == Json::array({"1", "3", "6", "11", "20", "37", "70", "135"}));
    CHECK(j["ratios"][0] == "3");
    CHECK(j["matrix"] == Json::array({Json::array({"1", "1"}), Json::array({"1", "1"})}));
    CHECK(j["class_C"] == "fails");
    CHECK(!j.contains("shape"));
    CHECK(!j.contains("p"));
    REQUIRE(j.contains("spec"));

    // the embedded word spec reproduces the advertised one positions
    std::string emb = write_temp("mbcli_perron_spec.json", j["spec"].dump());
    RunResult gen = run_cli("gen --spec " + emb + " --length 40 --concat");
    REQUIRE(gen.code == 0);
    std::string expected(40, '0');
    for (int n : {1, 3, 6, 11, 20, 37}) expected[static_cast<std::size_t>(n)] = '1';
    CHECK(gen.out == expected + "\n");

    std::string fibm = write_temp("mbcli_fibm.json", "[[2,1],[1,1]]");
    r = run_cli("construct perron --matrix " + fibm + " --count 8");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["target_exact"] == false);
    REQUIRE(j.contains("eigen"));
    CHECK(std::abs(std::stod(j["eigen"]["decimal"].get<std::string>()) - 2.6180339887498949) <=
          1e-6);
    CHECK(j["ones"][0] == "1");
    CHECK(j["ones"][1] == "3");
    CHECK(j["ones"][2] == "7");
    CHECK(j["ones"][3] == "16");

    r = run_cli("construct rational --p 3 --q 2 --count 12");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["kind"] == "rational");
    CHECK(j["p"] == 3);
    CHECK(j["q"] == 2);
    CHECK(j["target"] == "3/2");
    CHECK(j["target_exact"] == true);
    CHECK(j["class_C"] == "fails");
    CHECK(j["ones"][0] == "3");
    CHECK(j["ones"][11] == "54");
    CHECK(!j.contains("matrix"));
    CHECK(!j.contains("spec"));

    r = run_cli("construct remark2 --mu 2 --s 1 --t 0 --count 6");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["kind"] == "remark2");
    CHECK(j["shape"]["s"] == 1);
    CHECK(j["shape"]["t"] == 0);
    CHECK(j["ones"] == Json::array({"1", "5", "7", "13", "16", "26"}));

    r = run_cli("construct perron");
    CHECK(r.code == 5);

    r = run_cli("--format text construct rational --p 3 --q 2 --count 4");
    CHECK(r.code == 0);
    CHECK(r.out == "target 3/2 ones 3 4 5 6\n");
}

TEST_CASE("exponent command estimates from several input routes") {
    std::ostringstream ones;
    for (int k = 0; k <= 17; ++k) ones << (1L << k) << " ";
    std::string idx = write_temp("mbcli_powers.txt", ones.str());

    RunResult r = run_cli("exponent --indices " + idx + " --cf");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["base"] == 2);
    CHECK(j["v_b"]["best"] == "32767/32768");
    CHECK(std::abs(std::stod(j["v_b"]["tail"].get<std::string>()) - 32767.0 / 32768.0) <= 1e-9);
    CHECK(j["class_C"] == "holds");
    REQUIRE(!j["mu"].is_null());
    CHECK(j["mu"]["best"] == "2");
    CHECK(j["mu"]["applicable"] == true);
    CHECK(j["mu"]["diverging"] == false);
    REQUIRE(j.contains("mu_cf"));
    REQUIRE(!j["mu_cf"]["value"].is_null());
    CHECK(std::abs(std::stod(j["mu_cf"]["value"].get<std::string>()) - 2.0052591213181770) <=
          1e-4);
    CHECK(j["mu_cf"]["terms_used"].get<int>() >= 2);
    REQUIRE(!j["witness_blocks"].empty());
    CHECK(j["witness_blocks"][0]["start"] == 32769);
    CHECK(j["witness_blocks"][0]["digit"] == 0);
    CHECK(j["witness_blocks"][0]["exponent"] == "32767/32768");

    r = run_cli("exponent --spec " + data_file("tm.json"));
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["v_b"]["best"] == "1/2");
    CHECK(j["class_C"] == "fails");
    REQUIRE(!j["mu"].is_null());
    CHECK(j["mu"]["applicable"] == false);

    r = run_cli("exponent --raw 0100010001");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["v_b"]["best"] == "3");
    CHECK(j["v_b"]["digits_scanned"] == 9);
    CHECK(j["v_b"]["witnesses"] == 3);
    CHECK(j["witness_blocks"][0]["start"] == 2);
    CHECK(j["witness_blocks"][0]["end"] == 4);
    CHECK(j["witness_blocks"][0]["exponent"] == "3");

    r = run_cli("exponent --construct rational:3,2");
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["v_b"]["best"] == "2");
    CHECK(j["class_C"] == "fails");

    r = run_cli("--format text exponent --raw 0100010001");
    CHECK(r.code == 0);
    CHECK(r.out == "v_b best 3 tail 3 | mu tail 5 (not applicable) | class C fails\n");
}

TEST_CASE("analyze command bundles the three reports") {
    RunResult r =
        run_cli("analyze --spec " + data_file("p2.json") + " --delta 0 --horizon 1000000");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j.contains("blocks"));
    REQUIRE(j.contains("limsup"));
    REQUIRE(j.contains("exponent"));
    CHECK(j["blocks"]["kind"] == "delta");
    CHECK(j["blocks"]["count"].get<int>() >= 10);
    CHECK(j["limsup"]["method"] == "uniform-closed-form");
    CHECK(j["limsup"]["value"]["value"] == "2");
    CHECK(j["exponent"]["base"] == 2);
    CHECK(j["exponent"]["class_C"] == "holds");

    r = run_cli("--format text analyze --spec " + data_file("p2.json") +
                " --delta 0 --horizon 1000000");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("blocks ", 0) == 0);
    CHECK(r.out.find(" | limsup 2 (uniform-closed-form)\n") != std::string::npos);
}

TEST_CASE("repeated runs are byte identical") {
    std::string args = "limsup --spec " + data_file("p2.json") + " --delta 0 --horizon 2000000";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}
