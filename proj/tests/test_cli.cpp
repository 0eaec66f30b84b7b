#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
};

CmdResult run_shell(std::string cmd, bool keep_stderr = false) {
    cmd += keep_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

CmdResult run_cli(const std::string& args, bool keep_stderr = false) {
    return run_shell(std::string(CLI_PATH) + " " + args, keep_stderr);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

std::filesystem::path tmp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::filesystem::path write_tmp(const std::string& name, const std::string& content) {
    auto path = tmp_path(name);
    std::ofstream out(path);
    out << content;
    return path;
}

const std::string kCommunityHeader = "rank\tmatches\tsize\tmembers";

} // namespace

TEST_CASE("detect runs on a generated graph and reports communities") {
    auto r = run_cli("detect --model ring --k 3 --c 5 --tours 4000 --length 15 "
                     "--min 4 --max 6 --et 0.75 --seed 5");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == kCommunityHeader);
    auto cols = split(lines[1], '\t');
    REQUIRE(cols.size() == 4);
    CHECK(std::stoull(cols[1]) > 0);   // matches
    CHECK(std::stoull(cols[2]) >= 4);  // size
}

TEST_CASE("detect with a zero tour budget emits just the header") {
    auto r = run_cli("detect --model ring --tours 0");
    CHECK(r.code == 0);
    CHECK(r.out == kCommunityHeader + "\n");
}

TEST_CASE("bad arguments exit with the config code") {
    CHECK(run_cli("detect --model ring --et 1.5").code == 2);
    CHECK(run_cli("detect --model ring --et 0").code == 2);
    CHECK(run_cli("detect --model nosuch").code == 2);
    CHECK(run_cli("detect").code == 2);                         // no graph source
    CHECK(run_cli("detect --model ba --graph a.txt").code == 2); // two graph sources
    CHECK(run_cli("frobnicate").code == 2);                      // unknown subcommand
    CHECK(run_cli("sweep --model ba --axis bogus --values 1").code == 2);
}

TEST_CASE("unreadable input exits with the input code") {
    CHECK(run_cli("detect --graph /nonexistent/nope.txt").code == 3);
    auto path = write_tmp("ew_cli_badline.txt", "a b\nonly_one_token\n");
    CHECK(run_cli("detect --graph " + path.string()).code == 3);
}

TEST_CASE("circles rejects an unknown seed node") {
    CHECK(run_cli("circles --model ring --seed-node nosuchnode").code == 3);
}

TEST_CASE("gen writes the expected edge counts") {
    auto ba = run_cli("gen --model ba --n 1000 --m 1 --seed 7");
    REQUIRE(ba.code == 0);
    CHECK(lines_of(ba.out).size() == 999);

    auto ring = run_cli("gen --model ring --k 2 --c 3");
    REQUIRE(ring.code == 0);
    auto lines = lines_of(ring.out);
    CHECK(lines.size() == 8);
    for (const auto& line : lines) CHECK(split(line, ' ').size() == 2);

    auto json = run_cli("gen --model ring --k 2 --c 3 --format json");
    REQUIRE(json.code == 0);
    auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["nodes"].size() == 6);
    CHECK(doc["edges"].size() == 8);
}

TEST_CASE("detect output is byte-identical across thread counts") {
    const std::string base = "detect --model ring --k 4 --c 5 --tours 3000 --length 15 "
                             "--min 4 --max 6 --et 0.75 --seed 9 --threads ";
    auto one = run_cli(base + "1");
    auto four = run_cli(base + "4");
    REQUIRE(one.code == 0);
    REQUIRE(four.code == 0);
    CHECK(one.out == four.out);
    CHECK(!one.out.empty());
}

TEST_CASE("thread count can come from the environment") {
    const std::string args = "detect --model ring --k 4 --c 5 --tours 2000 --length 15 "
                             "--min 4 --max 6 --et 0.75 --seed 9";
    auto plain = run_cli(args + " --threads 1");
    auto env = run_shell("env ENTROPYWALK_THREADS=4 " + std::string(CLI_PATH) + " " + args);
    REQUIRE(plain.code == 0);
    REQUIRE(env.code == 0);
    CHECK(env.out == plain.out);
}

TEST_CASE("sweep over the acceptance threshold is monotone and tops out at 1") {
    auto r = run_cli("sweep --model ba --n 150 --m 2 --axis et --values 0.5,0.75,1.0 "
                     "--tours 400 --length 20 --replicates 2 --seed 11");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "x,mean,sd,replicates");
    double prev = -1.0;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto cols = split(lines[i], ',');
        REQUIRE(cols.size() == 4);
        double mean = std::stod(cols[1]);
        CHECK(mean >= prev);
        prev = mean;
        CHECK(cols[3] == "2");
    }
    auto last = split(lines.back(), ',');
    CHECK(std::stod(last[0]) == 1.0);
    CHECK(std::stod(last[1]) == 1.0);
    CHECK(std::stod(last[2]) == 0.0);
}

TEST_CASE("stream emits one JSON snapshot per interval") {
    auto path = write_tmp("ew_cli_empty_mutations.txt", "");
    auto r = run_cli("stream --model ring --k 3 --c 5 --budget 1000 --snapshot-interval 500 "
                     "--length 15 --min 4 --max 6 --et 0.75 --seed 4 --format json "
                     "--mutations " + path.string());
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    auto first = nlohmann::json::parse(lines[0]);
    auto second = nlohmann::json::parse(lines[1]);
    CHECK(first["tours"] == 500);
    CHECK(second["tours"] == 1000);
    CHECK(second["top"].is_array());
    CHECK(!second["top"].empty());
}

TEST_CASE("stream applies mutations from a file") {
    auto path = write_tmp("ew_cli_mutations.txt",
                          "+n fresh\n+e fresh c0_0\n-e nothere alsonot\nbogus line\n");
    auto r = run_cli("stream --model ring --k 3 --c 5 --budget 100 --snapshot-interval 100 "
                     "--length 15 --min 4 --max 6 --mutations " + path.string() +
                     " --mutations-per-tour 4",
                     true);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mutations_applied=2") != std::string::npos);
    CHECK(r.out.find("mutation_errors=1") != std::string::npos);
    CHECK(r.out.find("mutation parse errors: 1") != std::string::npos);
}

TEST_CASE("centrality matches degree intuition on small graphs") {
    auto k4 = write_tmp("ew_cli_k4.txt", "a b\na c\na d\nb c\nb d\nc d\n");
    auto r = run_cli("centrality --graph " + k4.string() +
                     " --tours 4000 --length 10 --et 1.0 --seed 2");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "label\twalk_score\treference_score\tdelta\tpeak");
    for (size_t i = 1; i < lines.size(); ++i) {
        auto cols = split(lines[i], '\t');
        REQUIRE(cols.size() == 5);
        CHECK(std::stod(cols[1]) == doctest::Approx(0.25).epsilon(0.1));
    }

    auto star = write_tmp("ew_cli_star.txt",
                          "hub s1\nhub s2\nhub s3\nhub s4\nhub s5\n");
    auto rs = run_cli("centrality --graph " + star.string() +
                      " --tours 4000 --length 10 --et 1.0 --seed 2");
    REQUIRE(rs.code == 0);
    std::string best_label;
    double best_score = -1.0;
    for (const auto& line : lines_of(rs.out)) {
        auto cols = split(line, '\t');
        if (cols.size() != 5 || cols[0] == "label") continue;
        double score = std::stod(cols[1]);
        if (score > best_score) {
            best_score = score;
            best_label = cols[0];
        }
    }
    CHECK(best_label == "hub");
    CHECK(best_score == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("circles keeps only communities that contain the seed node") {
    auto r = run_cli("circles --model ring --k 3 --c 6 --seed-node c1_2 --tours 6000 "
                     "--length 15 --min 4 --max 6 --et 0.75 --seed 13");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == kCommunityHeader);
    for (size_t i = 1; i < lines.size(); ++i) {
        auto cols = split(lines[i], '\t');
        REQUIRE(cols.size() == 4);
        CHECK(cols[3].find("c1_2:") != std::string::npos);
    }
    // strongest circle stays inside the seed's own clique
    for (const auto& member : split(split(lines[1], '\t')[3], ','))
        CHECK(member.substr(0, 3) == "c1_");
}

TEST_CASE("json format and file output work for detect") {
    auto r = run_cli("detect --model ring --k 3 --c 5 --tours 2000 --length 15 --min 4 "
                     "--max 6 --et 0.75 --seed 5 --format json");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.contains("communities"));
    CHECK(!doc["communities"].empty());
    CHECK(doc["communities"][0]["rank"] == 1);

    auto out_path = tmp_path("ew_cli_detect_out.tsv");
    std::filesystem::remove(out_path);
    auto rf = run_cli("detect --model ring --tours 100 --length 15 --min 4 --max 6 "
                      "--output " + out_path.string());
    REQUIRE(rf.code == 0);
    CHECK(rf.out.empty());
    std::ifstream in(out_path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == kCommunityHeader);
}
