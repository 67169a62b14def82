#include "fairssl/cli.hpp"
#include "fairssl/io.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <initializer_list>
#include <sstream>

using namespace fairssl;
using fairssl::testing::read_file;
using fairssl::testing::TempDir;
using fairssl::testing::write_file;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"fairssl"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : storage) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Small enough to run in a second or two.
std::string small_config(const std::string& name) {
    return R"({"name": ")" + name + R"(", "dataset": "synthetic", "synthetic": {"n": 800, "bias": 0.3, "seed": 7},
  "variant": ["default", "ST"], "labeled_fraction": 0.2, "folds": 2, "repeats": 1, "seed": 42,
  "training": {"optimizer": "newton", "epochs": 100}})";
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    const auto none = cli({});
    CHECK(none.code == kExitConfig);
    const auto unknown = cli({"run", "--bogus"});
    CHECK(unknown.code == kExitConfig);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({"run", "--config", "/nonexistent/missing.json"}).code == kExitConfig);
    CHECK(cli({"run", "--variant", "XY", "--quiet"}).code == kExitConfig);
    CHECK(cli({"run", "--folds", "1", "--quiet"}).code == kExitConfig);
    CHECK(cli({"report", "--in", "x.jsonl", "--format", "yaml"}).code == kExitConfig);
}

TEST_CASE("help exits with 0") {
    const auto help = cli({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("run") != std::string::npos);
    CHECK(help.out.find("Flags override values from --config") != std::string::npos);
    CHECK(cli({"run", "--help"}).out.find("--labeled-fraction") != std::string::npos);
}

TEST_CASE("runtime errors exit with 2") {
    TempDir dir("cli_rt");
    write_file(dir / "junk.json", R"({"kind": "nothing"})");
    CHECK(cli({"report", "--in", (dir / "junk.json").string()}).code == kExitRuntime);
}

TEST_CASE("missing input files are config errors") {
    TempDir dir("cli_missing");
    CHECK(cli({"report", "--in", (dir / "absent.jsonl").string()}).code == kExitConfig);
    CHECK(cli({"compare", "--in", (dir / "absent.jsonl").string()}).code == kExitConfig);
}

TEST_CASE("run writes results and report renders them") {
    TempDir dir("cli_run");
    write_file(dir / "cfg.json", small_config("small"));
    const auto out = dir / "out";
    const auto r = cli({"run", "--config", (dir / "cfg.json").string(), "--out", out.string(), "--quiet"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("ST") != std::string::npos);

    const auto jsonl = out / "small.jsonl";
    CHECK(count_lines(read_file(jsonl)) == 4);  // 2 variants x 2 folds x 1 repeat
    const auto first = read_jsonl(jsonl).front();
    for (const char* key : {"dataset", "learner", "variant", "seed", "recall", "false_alarm", "precision", "accuracy",
                            "f1", "aod", "eod", "spd", "one_minus_di", "config"}) {
        CHECK_MESSAGE(first.contains(key), key);
    }
    CHECK(first.at("config") == config_to_json(load_config(dir / "cfg.json")));
    for (const auto& line : read_jsonl(jsonl)) {
        CHECK(stored_record_to_json(stored_record_from_json(line)) == line);
    }

    // CSV layout: header plus one row per variant, nine metric columns.
    const auto csv = cli({"report", "--in", jsonl.string(), "--format", "csv"});
    REQUIRE(csv.code == kExitOk);
    std::istringstream lines(csv.out);
    std::string header, row;
    std::getline(lines, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 9);
    CHECK(header.find("(-)") != std::string::npos);
    std::size_t rows = 0;
    while (std::getline(lines, row)) {
        if (!row.empty()) ++rows;
    }
    CHECK(rows == 2);

    for (const char* f : {"small.summary.json", "small.timings.json"}) {
        for (const char* fmt : {"text", "csv", "json"}) {
            CHECK(cli({"report", "--in", (out / f).string(), "--format", fmt}).code == kExitOk);
        }
    }
}

TEST_CASE("flags override the config file") {
    TempDir dir("cli_override");
    write_file(dir / "cfg.json", small_config("ovr"));
    const auto out = dir / "out";
    REQUIRE(cli({"run", "--config", (dir / "cfg.json").string(), "--variant", "default", "--folds", "3", "--seed", "9",
                 "--out", out.string(), "--quiet"})
                .code == kExitOk);
    const auto records = read_jsonl(out / "ovr.jsonl");
    CHECK(records.size() == 3);
    CHECK(records.front().at("variant") == "default");
    CHECK(records.front().at("config").at("seed") == 9);
    CHECK(records.front().at("config").at("labeled_fraction") == 0.2);
}

TEST_CASE("identical runs write identical files") {
    TempDir dir("cli_det");
    write_file(dir / "cfg.json", small_config("det"));
    for (const char* sub : {"a", "b"}) {
        REQUIRE(cli({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / sub).string(), "--quiet",
                     "--threads", sub[0] == 'a' ? "1" : "2"})
                    .code == kExitOk);
    }
    for (const char* f : {"det.jsonl", "det.summary.json"}) {
        CHECK(read_file(dir / "a" / f) == read_file(dir / "b" / f));
    }
}

TEST_CASE("compare, sweep and synth round-trip through report") {
    TempDir dir("cli_cmp");
    write_file(dir / "cfg.json", small_config("cmp"));
    const auto out = dir / "out";
    REQUIRE(cli({"run", "--config", (dir / "cfg.json").string(), "--out", out.string(), "--quiet"}).code == kExitOk);

    const auto cmp = cli({"compare", "--in", (out / "cmp.jsonl").string(), "--out", (out / "cmp.compare.json").string()});
    REQUIRE(cmp.code == kExitOk);
    const auto table = read_json(out / "cmp.compare.json");
    CHECK(table.at("tables").size() == 1);
    CHECK(cli({"report", "--in", (out / "cmp.compare.json").string()}).code == kExitOk);
    CHECK(cli({"compare", "--in", (out / "cmp.jsonl").string(), "--baseline", "CT"}).code == kExitConfig);

    const auto sweep = cli({"sweep", "--config", (dir / "cfg.json").string(), "--variant", "ST", "--fractions",
                            "0.2,0.1,0.2", "--out", out.string(), "--quiet"});
    REQUIRE(sweep.code == kExitOk);
    CHECK(read_json(out / "cmp.sweep.json").at("rows").size() == 2);
    CHECK(cli({"report", "--in", (out / "cmp.sweep.json").string()}).code == kExitOk);
    CHECK(cli({"report", "--in", (out / "cmp.sweep.timings.json").string()}).code == kExitOk);
    CHECK(cli({"sweep", "--fractions", "0.1,abc", "--quiet"}).code == kExitConfig);

    const auto csv = dir / "data" / "syn.csv";
    REQUIRE(cli({"synth", "--n", "200", "--out", csv.string()}).code == kExitOk);
    CHECK(count_lines(read_file(csv)) == 201);
    CHECK(std::filesystem::exists(dir / "data" / "syn.schema.json"));
    const auto rep = cli({"report", "--in", csv.string()});
    CHECK(rep.code == kExitOk);
    CHECK(rep.out.find("UU") != std::string::npos);

    // The written CSV runs like any other dataset; its schema is found next to it.
    CHECK(cli({"run", "--config", (dir / "cfg.json").string(), "--dataset", csv.string(), "--variant", "default",
               "--out", out.string(), "--quiet"})
              .code == kExitOk);
}
